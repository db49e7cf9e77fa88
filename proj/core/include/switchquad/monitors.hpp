#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "switchquad/simulation.hpp"

namespace switchquad::sim {

// ---------------------------------------------------------------------------------------------
// Lyapunov jump condition at switches

struct JumpCheck {
  double t = 0.0;
  std::size_t from = 0;
  std::size_t to = 0;
  double v_before = 0.0;  // 0.5 xi^T P_from xi
  double v_after = 0.0;   // 0.5 xi^T P_to xi
  double bound = 0.0;     // mu * v_before
  bool pass = true;
};

/// Checks V+ <= mu V- (1 + 1e-9) on the quadratic part at every mode change in the trace.
/// mu is the ADT-threshold jump constant of `modes`.
std::vector<JumpCheck> lyapunov_jump_monitor(const SimTrace& trace,
                                             std::span<const control::ControllerMode> modes);

// ---------------------------------------------------------------------------------------------
// Uncertainty envelope

/// Theta* per subsystem, with D taken from the matching controller and the desired-velocity
/// bound from the trajectory.
std::vector<Vec4> theta_star_list(const Scenario& scenario);

/// chi = -D^-1 E with E = (M - D) q_ddot + C q_dot + G + H q_u_ddot + d, from true parameters
/// and the actual accelerations stored in the record.
Vec4 lumped_uncertainty(const TraceRecord& rec, const dynamics::SubsystemParams& params,
                        const Vec4& d_diag);

struct EnvelopeReport {
  double max_slack = 0.0;  // max_t ||chi|| - Y^T Theta*; <= 0 means the envelope holds
  double t_at_max = 0.0;
  double max_ratio = 0.0;  // max_t ||chi|| / (Y^T Theta*)
  bool holds() const { return max_slack <= 0.0; }
};

/// `scale` multiplies Theta* (scale < 1 shrinks the envelope for sensitivity checks).
EnvelopeReport envelope_monitor(const SimTrace& trace, const Scenario& scenario,
                                std::span<const Vec4> theta_star, double scale = 1.0);

/// Max over records of |e_ddot - (-K1 e - K2 e_dot - delta + chi)|_inf.
double error_dynamics_residual(const SimTrace& trace, const Scenario& scenario);

// ---------------------------------------------------------------------------------------------
// Ultimate bound

struct UltimateBound {
  double delta = 0.0;
  double delta1 = 0.0;
  double level = 0.0;  // B = (delta + varpi delta1) / (varrho - kappa), a bound on V
  double b = 0.0;      // bound on ||xi||
};

/// Floors used for zeta and gamma in the Lyapunov normalization.
struct GainFloors {
  double zeta = 0.0;
  double gamma = 0.0;
};

/// Default floors: min over modes of eps_bar (zeta) and eps (gamma).
GainFloors default_gain_floors(std::span<const control::ControllerMode> modes);

/// Throws ConfigError if some alpha_i <= varrho/2 for its mode.
UltimateBound ultimate_bound(std::span<const Vec4> theta_star,
                             std::span<const control::ControllerMode> modes,
                             const switching::AdtThreshold& adt, double n0, double varpi,
                             double delta1, const GainFloors& floors);

/// Empirical delta1: max of sum_j theta_hat_j ||xi||^j (j = 0..2) of the active mode over
/// records inside the boundary layer (||r|| < varpi). Zero if the layer is never entered.
double delta1_estimate(const SimTrace& trace, double varpi);

struct UubVerdict {
  std::optional<double> entry_time;  // first t with V < B held for `hold` seconds
  double sup_after = 0.0;            // sup ||xi|| after entry
  double b = 0.0;
  bool pass = false;
};

UubVerdict uub_verdict(const SimTrace& trace, const UltimateBound& bound, double hold = 1.0);

// ---------------------------------------------------------------------------------------------
// Reporting and gain checks

/// Per-channel RMS tracking error over records with t in [t_begin, t_end]; z in metres,
/// attitude channels in degrees. Throws std::invalid_argument on an empty window.
Vec4 rms_errors(const SimTrace& trace, double t_begin, double t_end);

/// Largest |e_i| per channel over [t_begin, t_end]; z in metres, attitude in degrees.
Vec4 max_abs_errors(const SimTrace& trace, double t_begin, double t_end);

struct GainFreezeReport {
  double active_gamma_drift = 0.0;     // max |gamma_p(t) - gamma_p(interval start)|
  double inactive_theta_drift = 0.0;   // max over inactive modes
  double inactive_zeta_drift = 0.0;
  std::size_t intervals = 0;
  std::size_t active_intervals_evolving = 0;  // intervals where active theta_hat or zeta moved
};

/// Checks the gain-update pattern between consecutive mode changes.
GainFreezeReport gain_freeze_check(const SimTrace& trace);

struct GainBoundsReport {
  double min_theta_hat = 0.0;
  double min_zeta = 0.0;
  double min_gamma = 0.0;
  bool zeta_within_initial = true;
  bool gamma_within_initial = true;
  bool pass() const {
    return min_theta_hat >= 0.0 && min_zeta > 0.0 && min_gamma > 0.0 && zeta_within_initial &&
           gamma_within_initial;
  }
};

/// theta_hat >= 0, 0 < zeta <= zeta(0), 0 < gamma <= gamma(0) at every record.
GainBoundsReport gain_bounds_check(const SimTrace& trace);

}  // namespace switchquad::sim
