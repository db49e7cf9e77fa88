#include "switchquad/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <fmt/core.h>

#include "switchquad/integrator.hpp"

namespace switchquad::sim {
namespace {

using control::AdaptiveGains;
using control::ControllerMode;
using dynamics::PlantState;

constexpr Eigen::Index kPlantSize = 12;
constexpr Eigen::Index kGainSize = 6;

Eigen::Index gain_offset(std::size_t mode) {
  return kPlantSize + static_cast<Eigen::Index>(mode) * kGainSize;
}

Eigen::VectorXd pack(const PlantState& s, std::span<const ControllerMode> modes) {
  Eigen::VectorXd y(kPlantSize + kGainSize * static_cast<Eigen::Index>(modes.size()));
  y << s.q, s.q_u, s.q_dot, s.q_u_dot, Eigen::VectorXd::Zero(kGainSize * modes.size());
  for (std::size_t m = 0; m < modes.size(); ++m) {
    const AdaptiveGains& g = modes[m].config.initial;
    y.segment<4>(gain_offset(m)) = g.theta_hat;
    y[gain_offset(m) + 4] = g.zeta;
    y[gain_offset(m) + 5] = g.gamma;
  }
  return y;
}

PlantState unpack_plant(const Eigen::VectorXd& y) {
  PlantState s;
  s.q = y.segment<4>(0);
  s.q_u = y.segment<2>(4);
  s.q_dot = y.segment<4>(6);
  s.q_u_dot = y.segment<2>(10);
  return s;
}

std::vector<AdaptiveGains> unpack_gains(const Eigen::VectorXd& y, std::size_t count) {
  std::vector<AdaptiveGains> out(count);
  for (std::size_t m = 0; m < count; ++m) {
    out[m].theta_hat = y.segment<4>(gain_offset(m));
    out[m].zeta = y[gain_offset(m) + 4];
    out[m].gamma = y[gain_offset(m) + 5];
  }
  return out;
}

// Inputs held constant over one integration step.
struct StepInputs {
  std::size_t mode = 0;
  Vec6 feedback = Vec6::Zero();
  Vec4 pulses = Vec4::Zero();
};

class ClosedLoop {
 public:
  ClosedLoop(const Scenario& scenario, std::span<const ControllerMode> modes)
      : scenario_(scenario), modes_(modes) {}

  void set_inputs(const StepInputs& in) { in_ = in; }

  Eigen::VectorXd operator()(double t, const Eigen::VectorXd& y) const {
    return evaluate(t, y, nullptr);
  }

  Eigen::VectorXd evaluate(double t, const Eigen::VectorXd& y, TraceRecord* rec) const {
    const PlantState plant = unpack_plant(y);
    const std::vector<AdaptiveGains> gains = unpack_gains(y, modes_.size());
    const ControllerMode& mode = modes_[in_.mode];
    const dynamics::SubsystemParams& params = scenario_.subsystems[in_.mode];

    const DesiredPoint desired = scenario_.trajectory.at(t);
    Vec8 xi;
    xi << plant.q - desired.q, plant.q_dot - desired.q_dot;

    const Vec4 r = control::filtered_error(mode.p, xi);
    const Vec4 y_reg = control::regressor(xi, in_.feedback);
    const double rho = control::gain_rho(gains[in_.mode], y_reg);
    const Vec4 delta = control::delta_tau(rho, r, scenario_.varpi);
    const Vec4 tau = control::control_tau(mode, xi, delta, desired.q_ddot);
    const Vec4 d = params.disturbance.evaluate_smooth(t) + in_.pulses;

    const dynamics::Accelerations acc = dynamics::plant_accels(plant, tau, params, d);
    const std::vector<AdaptiveGains> rates =
        control::adaptive_derivatives(modes_, gains, in_.mode, r, xi, in_.feedback);

    Eigen::VectorXd dy(y.size());
    dy.segment<4>(0) = plant.q_dot;
    dy.segment<2>(4) = plant.q_u_dot;
    dy.segment<4>(6) = acc.q_ddot;
    dy.segment<2>(10) = acc.q_u_ddot;
    for (std::size_t m = 0; m < rates.size(); ++m) {
      dy.segment<4>(gain_offset(m)) = rates[m].theta_hat;
      dy[gain_offset(m) + 4] = rates[m].zeta;
      dy[gain_offset(m) + 5] = rates[m].gamma;
    }

    if (rec != nullptr) {
      rec->t = t;
      rec->sigma = in_.mode;
      rec->state = plant;
      rec->state.q_ddot_bar = acc.stacked();
      rec->accel_feedback = in_.feedback;
      rec->desired = desired;
      rec->xi = xi;
      rec->r = r;
      rec->delta = delta;
      rec->tau = tau;
      rec->rho = rho;
      rec->disturbance = d;
      rec->gains = gains;
      rec->v_quad = 0.5 * xi.dot(mode.p * xi);
    }
    return dy;
  }

 private:
  const Scenario& scenario_;
  std::span<const ControllerMode> modes_;
  StepInputs in_;
};

long long step_index(double t, double t0, double h) { return std::llround((t - t0) / h); }

}  // namespace

void validate(const Scenario& scenario) {
  if (scenario.subsystems.empty()) throw ConfigError("subsystems", "at least one subsystem required");
  if (scenario.controllers.size() != scenario.subsystems.size()) {
    throw ConfigError("controller", fmt::format("expected {} modes (one per subsystem), got {}",
                                                scenario.subsystems.size(),
                                                scenario.controllers.size()));
  }
  for (std::size_t i = 0; i < scenario.subsystems.size(); ++i) {
    try {
      dynamics::validate(scenario.subsystems[i]);
    } catch (const ConfigError& e) {
      throw ConfigError(fmt::format("subsystems[{}].{}", i, e.path()), e.what());
    }
  }
  if (!(scenario.varpi > 0.0) || !std::isfinite(scenario.varpi)) {
    throw ConfigError("sim.varpi", "boundary layer must be finite and > 0");
  }
  if (!(scenario.kappa_fraction > 0.0 && scenario.kappa_fraction < 1.0)) {
    throw ConfigError("switching.kappa_fraction", "must lie in (0, 1)");
  }
  if (!(scenario.step > 0.0) || !std::isfinite(scenario.step)) {
    throw ConfigError("sim.h", "step must be finite and > 0");
  }
  if (scenario.schedule.events.empty()) throw ConfigError("switching.schedule", "missing");
  const double t0 = scenario.schedule.start();
  if (!(scenario.horizon > t0) || !std::isfinite(scenario.horizon)) {
    throw ConfigError("sim.T", "horizon must exceed the start time");
  }
  const double span = scenario.horizon - t0;
  const double steps = span / scenario.step;
  if (std::abs(steps - std::round(steps)) > 1e-6) {
    throw ConfigError("sim.T", "horizon must be an integer number of steps");
  }
  if (scenario.schedule.horizon_end != scenario.horizon) {
    throw ConfigError("switching.schedule", "schedule horizon differs from sim.T");
  }
  switching::validate(scenario.schedule, scenario.subsystems.size());
  validate(scenario.trajectory);
  try {
    dynamics::check_state(scenario.initial);
  } catch (const SimulationError& e) {
    throw ConfigError("sim.initial", e.what());
  }
}

std::vector<ControllerMode> synthesize_modes(const Scenario& scenario) {
  std::vector<ControllerMode> modes;
  modes.reserve(scenario.controllers.size());
  for (std::size_t i = 0; i < scenario.controllers.size(); ++i) {
    try {
      modes.push_back(control::synthesize(scenario.controllers[i]));
    } catch (const ConfigError& e) {
      throw ConfigError(fmt::format("controller[{}].{}", i, e.path()), e.what());
    }
  }
  return modes;
}

SimTrace simulate(const Scenario& scenario) {
  validate(scenario);
  const std::vector<ControllerMode> modes = synthesize_modes(scenario);
  return simulate(scenario, modes);
}

SimTrace simulate(const Scenario& scenario, std::span<const ControllerMode> modes) {
  validate(scenario);
  if (modes.size() != scenario.subsystems.size()) {
    throw ConfigError("controller", "synthesized mode count differs from subsystem count");
  }

  const double h = scenario.step;
  const double t0 = scenario.schedule.start();
  const long long n_steps = step_index(scenario.horizon, t0, h);

  // Snap switch instants to the grid: the new mode governs the step starting at that index.
  std::vector<std::pair<long long, std::size_t>> switch_steps;
  for (std::size_t i = 1; i < scenario.schedule.events.size(); ++i) {
    const auto& ev = scenario.schedule.events[i];
    switch_steps.emplace_back(step_index(ev.time, t0, h), ev.mode);
  }

  SimTrace trace;
  trace.step = h;
  trace.modes.assign(modes.begin(), modes.end());
  trace.records.reserve(static_cast<std::size_t>(n_steps) + 1);

  ClosedLoop loop(scenario, modes);
  Eigen::VectorXd y = pack(scenario.initial, modes);
  Vec6 feedback = scenario.initial.q_ddot_bar;
  std::size_t active = scenario.schedule.events.front().mode;
  std::size_t next_switch = 0;

  auto abort = [&](const std::string& why, double t) {
    throw SimulationAborted(fmt::format("simulation aborted at t={:.6f}: {}", t, why),
                            std::move(trace));
  };

  for (long long k = 0; k <= n_steps; ++k) {
    const double t = t0 + static_cast<double>(k) * h;
    while (next_switch < switch_steps.size() && switch_steps[next_switch].first <= k) {
      active = switch_steps[next_switch].second;
      ++next_switch;
    }

    StepInputs in;
    in.mode = active;
    in.feedback = feedback;
    in.pulses = scenario.subsystems[active].disturbance.evaluate_pulses(t);
    loop.set_inputs(in);

    TraceRecord rec;
    Eigen::VectorXd k1;
    try {
      k1 = loop.evaluate(t, y, &rec);
    } catch (const SimulationError& e) {
      abort(e.what(), t);
    }
    feedback = rec.state.q_ddot_bar;
    trace.records.push_back(std::move(rec));
    if (k == n_steps) break;

    try {
      y = rk4_step(loop, t, y, h, k1);
    } catch (const SimulationError& e) {
      abort(e.what(), t);
    }
    for (std::size_t m = 0; m < modes.size(); ++m) {
      auto theta = y.segment<4>(gain_offset(m));
      theta = theta.cwiseMax(0.0);
    }
    if (!y.allFinite()) abort("non-finite state", t + h);
  }
  return trace;
}

}  // namespace switchquad::sim
