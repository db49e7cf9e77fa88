#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "switchquad/types.hpp"

namespace switchquad::control {

/// Live adaptive gains of one mode (also used for their time derivatives).
struct AdaptiveGains {
  Vec4 theta_hat = Vec4::Zero();
  double zeta = 0.0;
  double gamma = 0.0;

  bool operator==(const AdaptiveGains&) const = default;
};

/// Designer-supplied parameters for one mode.
struct ModeConfig {
  Mat4 k1 = Mat4::Identity();
  Mat4 k2 = Mat4::Identity();
  Mat8 q = Mat8::Identity();
  Vec4 d_diag = Vec4::Ones();
  Vec4 alpha = Vec4::Ones();
  double eps = 0.0;      // floor source of the inactive-mode gamma law
  double eps_bar = 0.0;  // floor source of the active-mode zeta law
  AdaptiveGains initial;

  bool operator==(const ModeConfig&) const = default;
};

/// A synthesized mode: the configuration plus the solved closed loop and Lyapunov matrix.
struct ControllerMode {
  ModeConfig config;
  Mat8 a = Mat8::Zero();
  Mat8 p = Mat8::Zero();
  double p_eig_min = 0.0;
  double p_eig_max = 0.0;
  double varrho = 0.0;  // lambda_min(Q) / lambda_max(P)
};

/// Solves the mode's Lyapunov equation and checks the adaptive-law design conditions
/// (alpha_i > varrho/2, theta_hat(0) > 0, zeta(0) > eps_bar, gamma(0) > eps).
/// Throws SynthesisError or ConfigError.
ControllerMode synthesize(const ModeConfig& config);

struct TrackingError {
  Vec4 e = Vec4::Zero();
  Vec4 e_dot = Vec4::Zero();

  Vec8 xi() const {
    Vec8 out;
    out << e, e_dot;
    return out;
  }
};

/// r = B^T P xi with B = [0; I].
inline Vec4 filtered_error(const Mat8& p, const Vec8& xi) { return p.bottomRows<4>() * xi; }

/// Y = (1, ||xi||, ||xi||^2, ||qbar_ddot||).
Vec4 regressor(const Vec8& xi, const Vec6& qddot_bar);

/// rho = Y^T theta_hat + zeta + gamma.
double gain_rho(const AdaptiveGains& gains, const Vec4& y);

/// Robust term with a boundary layer of width varpi.
Vec4 delta_tau(double rho, const Vec4& r, double varpi);

/// tau = D (-K1 e - K2 e_dot - delta + qd_ddot).
Vec4 control_tau(const ControllerMode& mode, const Vec8& xi, const Vec4& delta,
                 const Vec4& qddot_des);

/// Right-hand side of the adaptive laws for every mode, given which mode is active.
/// `gains[i]` is the current state of `modes[i]`. Throws std::out_of_range on a bad index or
/// std::invalid_argument on a size mismatch.
std::vector<AdaptiveGains> adaptive_derivatives(std::span<const ControllerMode> modes,
                                                std::span<const AdaptiveGains> gains,
                                                std::size_t active, const Vec4& r_active,
                                                const Vec8& xi, const Vec6& qddot_bar);

}  // namespace switchquad::control
