#pragma once

#include "switchquad/disturbance.hpp"
#include "switchquad/types.hpp"

namespace switchquad::dynamics {

/// Roll/pitch magnitude at which the plant refuses to evaluate (cos(roll)cos(pitch) -> 0).
inline constexpr double kAttitudeLimit = kPi / 2.0 - 1e-3;

/// Physical constants of one switched subsystem (one payload configuration).
struct SubsystemParams {
  double mass = 0.0;         // kg
  double ixx = 0.0;          // kg m^2
  double iyy = 0.0;
  double izz = 0.0;
  double arm_length = 0.0;   // m
  double gravity = 9.81;     // m/s^2
  DisturbanceSpec disturbance;
};

/// Throws ConfigError unless all physical constants are finite and strictly positive.
void validate(const SubsystemParams& params);

/// Accelerations of the full six-DoF body.
struct Accelerations {
  Vec4 q_ddot = Vec4::Zero();    // (z, roll, pitch, yaw)
  Vec2 q_u_ddot = Vec2::Zero();  // (x, y)

  /// q-bar double-dot = [q_ddot; q_u_ddot].
  Vec6 stacked() const {
    Vec6 out;
    out << q_ddot, q_u_ddot;
    return out;
  }
};

struct PlantState {
  Vec4 q = Vec4::Zero();
  Vec4 q_dot = Vec4::Zero();
  Vec2 q_u = Vec2::Zero();
  Vec2 q_u_dot = Vec2::Zero();
  // Most recent accelerations of q-bar, available to the controller as feedback.
  Vec6 q_ddot_bar = Vec6::Zero();

  double roll() const { return q[axis::kRoll]; }
  double pitch() const { return q[axis::kPitch]; }
  double yaw() const { return q[axis::kYaw]; }
};

/// Throws SimulationError if the state is non-finite or beyond the attitude limit.
void check_state(const PlantState& state);

/// Collocated four-DoF form M q_ddot + C q_dot + G + H q_u_ddot = tau.
struct CollocatedMatrices {
  Mat4 m = Mat4::Zero();
  Mat4 c = Mat4::Zero();
  Vec4 g = Vec4::Zero();
  Mat42 h = Mat42::Zero();
};

/// Earth-to-body rotation for roll, pitch, yaw (radians).
Mat3 rotation_matrix(double roll, double pitch, double yaw);

/// Six-DoF accelerations under thrust/torques `tau` = (T, tau_roll, tau_pitch, tau_yaw).
/// The disturbance reduces the applied input: tau_eff = tau - disturbance.
Accelerations plant_accels(const PlantState& state, const Vec4& tau, const SubsystemParams& params,
                           const Vec4& disturbance);

CollocatedMatrices collocated_matrices(const PlantState& state, const SubsystemParams& params);

/// Constants of the norm bounds ||C|| <= c_bar ||q_dot||, ||G|| <= g_bar, ||H|| <= h_bar,
/// ||d|| <= d_bar. Closed-form over-approximations from the physical constants.
struct UncertaintyConstants {
  double c_bar = 0.0;
  double g_bar = 0.0;
  double h_bar = 0.0;
  double d_bar = 0.0;
};

UncertaintyConstants uncertainty_constants(const SubsystemParams& params);

/// ||D^-1 M(q) - I|| at a given state (D diagonal, given by its diagonal).
double mass_mismatch(const PlantState& state, const SubsystemParams& params, const Vec4& d_diag);

/// Supremum of ||D^-1 M(q) - I|| over |roll|, |pitch| <= kAttitudeLimit.
double mass_mismatch_sup(const SubsystemParams& params, const Vec4& d_diag);

/// True envelope coefficients Theta* = (theta0*, theta1*, theta2*, theta3*) bounding the
/// lumped uncertainty: ||chi|| <= theta0* + theta1* ||xi|| + theta2* ||xi||^2 + theta3* ||qbar_ddot||.
/// Verification-only; the controller never sees these.
Vec4 theta_star(const UncertaintyConstants& k, const Vec4& d_diag, double qd_dot_sup,
                double mass_mismatch_norm);

/// Theta* for a subsystem using the supremum of the mass mismatch over the valid attitude region.
Vec4 theta_star_oracle(const SubsystemParams& params, const Vec4& d_diag, double qd_dot_sup);

}  // namespace switchquad::dynamics
