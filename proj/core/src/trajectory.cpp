#include "switchquad/trajectory.hpp"

#include <cmath>

#include "switchquad/error.hpp"

namespace switchquad {

DesiredPoint SinusoidalTrajectory::at(double t) const {
  DesiredPoint p;
  for (int i = 0; i < 4; ++i) {
    const double arg = frequency[i] * t + phase[i];
    const double s = std::sin(arg), c = std::cos(arg);
    const double w = frequency[i];
    p.q[i] = offset[i] + amplitude[i] * s;
    p.q_dot[i] = amplitude[i] * w * c;
    p.q_ddot[i] = -amplitude[i] * w * w * s;
  }
  return p;
}

double SinusoidalTrajectory::velocity_bound() const {
  return amplitude.cwiseProduct(frequency).norm();
}

double SinusoidalTrajectory::acceleration_bound() const {
  return amplitude.cwiseProduct(frequency).cwiseProduct(frequency).norm();
}

void validate(const SinusoidalTrajectory& traj) {
  if (!traj.offset.allFinite() || !traj.amplitude.allFinite() || !traj.frequency.allFinite() ||
      !traj.phase.allFinite()) {
    throw ConfigError("trajectory", "parameters must be finite");
  }
}

}  // namespace switchquad
