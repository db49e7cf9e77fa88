#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "switchquad/error.hpp"
#include "switchquad/quad_dynamics.hpp"
#include "switchquad/switched_controller.hpp"
#include "switchquad/switching.hpp"
#include "switchquad/trajectory.hpp"

namespace switchquad::sim {

/// Everything needed to run one closed-loop experiment. Subsystem i is paired with
/// controller mode i; the schedule selects which pair is active.
struct Scenario {
  std::vector<dynamics::SubsystemParams> subsystems;
  std::vector<control::ModeConfig> controllers;
  double varpi = 0.1;  // boundary-layer width shared by all modes
  switching::SwitchSchedule schedule;
  double kappa_fraction = 0.9;
  SinusoidalTrajectory trajectory;
  dynamics::PlantState initial;
  double step = 1e-3;
  double horizon = 10.0;  // end time; the run starts at schedule.start()
};

/// Throws ConfigError when the scenario is inconsistent.
void validate(const Scenario& scenario);

/// Solves every controller mode.
std::vector<control::ControllerMode> synthesize_modes(const Scenario& scenario);

struct TraceRecord {
  double t = 0.0;
  std::size_t sigma = 0;         // active mode (0-based)
  dynamics::PlantState state;    // state.q_ddot_bar holds the actual accelerations at t
  Vec6 accel_feedback = Vec6::Zero();  // accelerations the controller used (one step old)
  DesiredPoint desired;
  Vec8 xi = Vec8::Zero();
  Vec4 r = Vec4::Zero();
  Vec4 delta = Vec4::Zero();
  Vec4 tau = Vec4::Zero();
  double rho = 0.0;
  Vec4 disturbance = Vec4::Zero();
  std::vector<control::AdaptiveGains> gains;  // one per mode
  double v_quad = 0.0;                        // 0.5 xi^T P_sigma xi
};

struct SimTrace {
  double step = 0.0;
  std::vector<control::ControllerMode> modes;
  std::vector<TraceRecord> records;

  bool empty() const { return records.empty(); }
};

/// Thrown when integration leaves the valid region; carries the trace up to the failure.
class SimulationAborted : public SimulationError {
 public:
  SimulationAborted(const std::string& what, SimTrace prefix)
      : SimulationError(what), prefix_(std::move(prefix)) {}

  const SimTrace& prefix() const noexcept { return prefix_; }

 private:
  SimTrace prefix_;
};

/// Fixed-step RK4 integration of plant, controller and adaptive gains as one augmented ODE.
///
/// The control law is evaluated at every RK4 stage from the mode active for the step. The
/// acceleration feedback is the value computed at the start of the previous step, held over
/// the step. Switch instants and pulse edges are snapped to step boundaries. The trace holds
/// one record per grid point t_k = t_0 + k h, k = 0..N.
SimTrace simulate(const Scenario& scenario);
SimTrace simulate(const Scenario& scenario, std::span<const control::ControllerMode> modes);

}  // namespace switchquad::sim
