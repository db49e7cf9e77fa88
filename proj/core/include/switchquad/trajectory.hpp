#pragma once

#include "switchquad/types.hpp"

namespace switchquad {

struct DesiredPoint {
  Vec4 q = Vec4::Zero();
  Vec4 q_dot = Vec4::Zero();
  Vec4 q_ddot = Vec4::Zero();
};

/// Per-channel q_i^d(t) = offset_i + amplitude_i * sin(frequency_i * t + phase_i).
/// A constant set-point is the special case amplitude = 0.
struct SinusoidalTrajectory {
  Vec4 offset = Vec4::Zero();
  Vec4 amplitude = Vec4::Zero();
  Vec4 frequency = Vec4::Zero();  // rad/s
  Vec4 phase = Vec4::Zero();

  DesiredPoint at(double t) const;

  /// sup_t ||q_dot^d(t)||, bounded by || (A_i w_i) ||.
  double velocity_bound() const;
  /// sup_t ||q_ddot^d(t)||, bounded by || (A_i w_i^2) ||.
  double acceleration_bound() const;

  bool operator==(const SinusoidalTrajectory&) const = default;
};

/// Throws ConfigError on non-finite parameters.
void validate(const SinusoidalTrajectory& traj);

}  // namespace switchquad
