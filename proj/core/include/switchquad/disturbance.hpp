#pragma once

#include <array>
#include <variant>
#include <vector>

#include "switchquad/types.hpp"

namespace switchquad {

struct Sinusoid {
  double amplitude = 0.0;
  double frequency = 0.0;  // rad/s
  double phase = 0.0;      // rad
};

// Rectangular pulses of `amplitude` on [start + k*period, start + k*period + width).
// `count` == 0 repeats forever; period is ignored when count == 1.
struct PulseTrain {
  double amplitude = 0.0;
  double start = 0.0;
  double width = 0.0;
  double period = 0.0;
  int count = 1;
};

using DisturbanceTerm = std::variant<Sinusoid, PulseTrain>;

// Additive disturbance on the four actuated channels (thrust, roll, pitch, yaw torques).
struct DisturbanceSpec {
  std::array<std::vector<DisturbanceTerm>, 4> channels;

  /// Full disturbance d(t).
  Vec4 evaluate(double t) const;

  /// Continuous part only (sinusoids).
  Vec4 evaluate_smooth(double t) const;

  /// Piecewise-constant part only (pulse trains).
  Vec4 evaluate_pulses(double t) const;

  /// Sum of absolute amplitudes per channel, so |d_i(t)| <= bound_i for all t.
  Vec4 channel_bounds() const;

  /// Bound on ||d(t)||_2.
  double norm_bound() const;

  bool empty() const;
};

void validate(const DisturbanceSpec& spec);

}  // namespace switchquad
