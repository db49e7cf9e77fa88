#include "switchquad/quad_dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "switchquad/error.hpp"

namespace switchquad::dynamics {
namespace {

bool positive(double v) { return std::isfinite(v) && v > 0.0; }

void require_finite_angles(double roll, double pitch, double yaw) {
  if (!std::isfinite(roll) || !std::isfinite(pitch) || !std::isfinite(yaw)) {
    throw std::invalid_argument("rotation_matrix: non-finite angle");
  }
}

}  // namespace

void validate(const SubsystemParams& params) {
  if (!positive(params.mass)) throw ConfigError("m", "mass must be finite and > 0");
  if (!positive(params.ixx)) throw ConfigError("Ixx", "inertia must be finite and > 0");
  if (!positive(params.iyy)) throw ConfigError("Iyy", "inertia must be finite and > 0");
  if (!positive(params.izz)) throw ConfigError("Izz", "inertia must be finite and > 0");
  if (!positive(params.arm_length)) throw ConfigError("l", "arm length must be finite and > 0");
  if (!positive(params.gravity)) throw ConfigError("g", "gravity must be finite and > 0");
  validate(params.disturbance);
}

void check_state(const PlantState& state) {
  if (!state.q.allFinite() || !state.q_dot.allFinite() || !state.q_u.allFinite() ||
      !state.q_u_dot.allFinite()) {
    throw SimulationError("non-finite plant state");
  }
  if (std::abs(state.roll()) >= kAttitudeLimit || std::abs(state.pitch()) >= kAttitudeLimit) {
    throw SimulationError("attitude singularity: |roll| or |pitch| reached pi/2 - 1e-3 (roll=" +
                          std::to_string(state.roll()) + ", pitch=" +
                          std::to_string(state.pitch()) + ")");
  }
}

Mat3 rotation_matrix(double roll, double pitch, double yaw) {
  require_finite_angles(roll, pitch, yaw);
  const double cf = std::cos(roll), sf = std::sin(roll);
  const double ct = std::cos(pitch), st = std::sin(pitch);
  const double cp = std::cos(yaw), sp = std::sin(yaw);
  Mat3 r;
  r << cp * ct, sp * ct, -st,
       cp * st * sf - sp * cf, sp * st * sf + cp * cf, sf * ct,
       cp * st * cf + sp * sf, sp * st * cf - cp * sf, ct * cf;
  return r;
}

Accelerations plant_accels(const PlantState& state, const Vec4& tau, const SubsystemParams& params,
                           const Vec4& disturbance) {
  check_state(state);
  const Vec4 u = tau - disturbance;
  const Mat3 r = rotation_matrix(state.roll(), state.pitch(), state.yaw());

  // m p_ddot + m g e3 = R^T (0, 0, T)
  const Vec3 p_ddot = r.row(2).transpose() * (u[0] / params.mass) - Vec3(0.0, 0.0, params.gravity);

  const double roll_rate = state.q_dot[axis::kRoll];
  const double pitch_rate = state.q_dot[axis::kPitch];
  const double yaw_rate = state.q_dot[axis::kYaw];
  const double l = params.arm_length;

  Accelerations a;
  a.q_u_ddot = p_ddot.head<2>();
  a.q_ddot[axis::kZ] = p_ddot.z();
  a.q_ddot[axis::kRoll] =
      (l * u[1] - (params.izz - params.iyy) * pitch_rate * yaw_rate) / params.ixx;
  a.q_ddot[axis::kPitch] =
      (l * u[2] - (params.ixx - params.izz) * roll_rate * yaw_rate) / params.iyy;
  a.q_ddot[axis::kYaw] = (u[3] - (params.iyy - params.ixx) * pitch_rate * roll_rate) / params.izz;
  return a;
}

CollocatedMatrices collocated_matrices(const PlantState& state, const SubsystemParams& params) {
  check_state(state);
  const double cf = std::cos(state.roll()), sf = std::sin(state.roll());
  const double ct = std::cos(state.pitch()), st = std::sin(state.pitch());
  const double cp = std::cos(state.yaw()), sp = std::sin(state.yaw());
  const double m = params.mass;
  const double l = params.arm_length;

  CollocatedMatrices out;
  out.m.diagonal() << m * ct * cf, params.ixx / l, params.iyy / l, params.izz;

  out.c(1, 3) = (params.izz - params.iyy) / l * state.q_dot[axis::kPitch];
  out.c(2, 1) = (params.ixx - params.izz) / l * state.q_dot[axis::kYaw];
  out.c(3, 2) = (params.iyy - params.ixx) * state.q_dot[axis::kRoll];

  out.g[0] = m * params.gravity * ct * cf;

  out.h(0, 0) = m * (cp * st * cf + sp * sf);
  out.h(0, 1) = m * (sp * st * cf - cp * sf);
  return out;
}

UncertaintyConstants uncertainty_constants(const SubsystemParams& params) {
  const double l = params.arm_length;
  UncertaintyConstants k;
  k.c_bar = std::max(std::abs(params.izz - params.iyy), std::abs(params.ixx - params.izz)) / l +
            std::abs(params.iyy - params.ixx);
  k.g_bar = params.mass * params.gravity;
  k.h_bar = std::sqrt(2.0) * params.mass;
  k.d_bar = params.disturbance.norm_bound();
  return k;
}

double mass_mismatch(const PlantState& state, const SubsystemParams& params, const Vec4& d_diag) {
  const Mat4 m = collocated_matrices(state, params).m;
  return (m.diagonal().cwiseQuotient(d_diag) - Vec4::Ones()).cwiseAbs().maxCoeff();
}

double mass_mismatch_sup(const SubsystemParams& params, const Vec4& d_diag) {
  // M is diagonal; only M(0,0) = m cos(roll) cos(pitch) varies, linearly in the cosine product.
  const double c_min = std::cos(kAttitudeLimit) * std::cos(kAttitudeLimit);
  const double m = params.mass;
  const double l = params.arm_length;
  const double z_term =
      std::max(std::abs(m * c_min / d_diag[0] - 1.0), std::abs(m / d_diag[0] - 1.0));
  return std::max({z_term, std::abs(params.ixx / (l * d_diag[1]) - 1.0),
                   std::abs(params.iyy / (l * d_diag[2]) - 1.0),
                   std::abs(params.izz / d_diag[3] - 1.0)});
}

Vec4 theta_star(const UncertaintyConstants& k, const Vec4& d_diag, double qd_dot_sup,
                double mass_mismatch_norm) {
  const double d_inv = 1.0 / d_diag.minCoeff();
  Vec4 theta;
  theta[0] = d_inv * (k.g_bar + k.d_bar + k.c_bar * qd_dot_sup * qd_dot_sup);
  theta[1] = 2.0 * k.c_bar * d_inv * qd_dot_sup;
  theta[2] = k.c_bar * d_inv;
  theta[3] = mass_mismatch_norm + d_inv * k.h_bar;
  return theta;
}

Vec4 theta_star_oracle(const SubsystemParams& params, const Vec4& d_diag, double qd_dot_sup) {
  return theta_star(uncertainty_constants(params), d_diag, qd_dot_sup,
                    mass_mismatch_sup(params, d_diag));
}

}  // namespace switchquad::dynamics
