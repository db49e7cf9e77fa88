#include "switchquad/presets.hpp"

#include <stdexcept>
#include <string>

namespace switchquad::presets {
namespace {

constexpr double kArmLength = 0.2;
constexpr double kVarpi = 0.01;
constexpr double kHorizon = 100.0;

DisturbanceSpec s5_disturbance() {
  DisturbanceSpec d;
  d.channels[axis::kZ].push_back(Sinusoid{0.05, 0.5, 0.0});
  d.channels[axis::kYaw].push_back(PulseTrain{1e-3, 20.0, 2.0, 40.0, 2});
  return d;
}

dynamics::SubsystemParams payload(double m, double ixx, double iyy, double izz) {
  dynamics::SubsystemParams p;
  p.mass = m;
  p.ixx = ixx;
  p.iyy = iyy;
  p.izz = izz;
  p.arm_length = kArmLength;
  p.disturbance = s5_disturbance();
  return p;
}

control::ModeConfig gains(double k1, double k2) {
  control::ModeConfig c;
  c.k1 = k1 * Mat4::Identity();
  c.k2 = k2 * Mat4::Identity();
  c.q = 2.0 * Mat8::Identity();
  c.d_diag << 2.0, 1e-4, 1e-4, 1e-4;
  c.alpha = Vec4::Constant(0.6);
  c.eps = 0.005;
  c.eps_bar = 0.005;
  c.initial.theta_hat << 1.2, 1.3, 1.4, 1.5;
  c.initial.zeta = 1.0;
  c.initial.gamma = 1.0;
  return c;
}

}  // namespace

sim::Scenario paper_s5() {
  sim::Scenario sc;
  sc.subsystems = {payload(1.5, 1.69e-5, 1.69e-5, 3.38e-5), payload(1.6, 0.011, 0.010, 1.27e-4),
                   payload(1.7, 0.032, 0.030, 2.20e-4)};
  sc.controllers = {gains(120.0, 100.0), gains(150.0, 120.0), gains(200.0, 140.0)};
  sc.varpi = kVarpi;
  sc.kappa_fraction = 0.9;

  sc.trajectory.offset << 2.0, 0.0, 0.0, 0.0;
  sc.trajectory.amplitude << 1.0, 0.0, 0.0, 0.0;
  sc.trajectory.frequency << 0.1, 0.0, 0.0, 0.0;

  sc.initial.q << 0.0, 0.1, 0.1, 0.1;
  sc.initial.q_u << 0.1, 0.1;

  sc.step = 1e-3;
  sc.horizon = kHorizon;

  // Lift-off with payload changes: a burst of N0 fast switches, compensated by two slow ones,
  // after which the heaviest configuration is carried for the rest of the flight.
  const switching::ExplicitPattern lift{{{0.0, 0}, {2.0, 1}, {3.5, 2}, {5.0, 0}, {9.5, 1}, {16.5, 2}}};
  sc.schedule = switching::generate_schedule(lift, 7.0, 3.0, 0.0, kHorizon, {});
  return sc;
}

std::vector<std::string_view> names() { return {"paper_s5"}; }

sim::Scenario by_name(std::string_view name) {
  if (name == "paper_s5") return paper_s5();
  throw std::invalid_argument("unknown preset '" + std::string(name) + "'");
}

}  // namespace switchquad::presets
