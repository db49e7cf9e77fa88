#include "switchquad/switched_controller.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <stdexcept>
#include <string>

#include "switchquad/error.hpp"
#include "switchquad/lyapunov.hpp"

namespace switchquad::control {

ControllerMode synthesize(const ModeConfig& config) {
  if (!(config.d_diag.array() > 0.0).all() || !config.d_diag.allFinite()) {
    throw ConfigError("D", "diagonal entries must be finite and > 0");
  }
  if (!(config.eps > 0.0)) throw ConfigError("eps", "must be > 0");
  if (!(config.eps_bar > 0.0)) throw ConfigError("eps_bar", "must be > 0");
  if (!(config.initial.theta_hat.array() > 0.0).all()) {
    throw ConfigError("theta0", "initial theta_hat entries must be > 0");
  }
  if (!(config.initial.zeta > config.eps_bar)) throw ConfigError("zeta0", "must exceed eps_bar");
  if (!(config.initial.gamma > config.eps)) throw ConfigError("gamma0", "must exceed eps");

  ControllerMode mode;
  mode.config = config;
  mode.a = build_closed_loop(config.k1, config.k2);
  mode.p = solve_lyapunov(mode.a, config.q);

  Eigen::SelfAdjointEigenSolver<Mat8> p_eig(mode.p, Eigen::EigenvaluesOnly);
  Eigen::SelfAdjointEigenSolver<Mat8> q_eig(config.q, Eigen::EigenvaluesOnly);
  mode.p_eig_min = p_eig.eigenvalues().minCoeff();
  mode.p_eig_max = p_eig.eigenvalues().maxCoeff();
  mode.varrho = q_eig.eigenvalues().minCoeff() / mode.p_eig_max;

  for (int i = 0; i < 4; ++i) {
    if (!(config.alpha[i] > mode.varrho / 2.0)) {
      throw ConfigError("alpha[" + std::to_string(i) + "]",
                        "must exceed varrho/2 = " + std::to_string(mode.varrho / 2.0));
    }
  }
  return mode;
}

Vec4 regressor(const Vec8& xi, const Vec6& qddot_bar) {
  const double n = xi.norm();
  return {1.0, n, n * n, qddot_bar.norm()};
}

double gain_rho(const AdaptiveGains& gains, const Vec4& y) {
  return y.dot(gains.theta_hat) + gains.zeta + gains.gamma;
}

Vec4 delta_tau(double rho, const Vec4& r, double varpi) {
  const double n = r.norm();
  if (n >= varpi) return rho * r / n;
  return rho * r / varpi;
}

Vec4 control_tau(const ControllerMode& mode, const Vec8& xi, const Vec4& delta,
                 const Vec4& qddot_des) {
  const Vec4 feedback = mode.config.k1 * xi.head<4>() + mode.config.k2 * xi.tail<4>();
  return mode.config.d_diag.asDiagonal() * (-feedback - delta + qddot_des);
}

std::vector<AdaptiveGains> adaptive_derivatives(std::span<const ControllerMode> modes,
                                                std::span<const AdaptiveGains> gains,
                                                std::size_t active, const Vec4& r_active,
                                                const Vec8& xi, const Vec6& qddot_bar) {
  if (modes.size() != gains.size()) {
    throw std::invalid_argument("adaptive_derivatives: modes/gains size mismatch");
  }
  if (active >= modes.size()) {
    throw std::out_of_range("adaptive_derivatives: active mode index out of range");
  }

  const double r_norm = r_active.norm();
  const double xi_norm = xi.norm();
  const double acc_norm = qddot_bar.norm();

  std::vector<AdaptiveGains> rates(modes.size());
  for (std::size_t s = 0; s < modes.size(); ++s) {
    const ModeConfig& cfg = modes[s].config;
    const AdaptiveGains& g = gains[s];
    AdaptiveGains& rate = rates[s];
    if (s == active) {
      const Vec4 drive(r_norm, r_norm * xi_norm, r_norm * xi_norm * xi_norm, r_norm * acc_norm);
      rate.theta_hat = drive - cfg.alpha.cwiseProduct(g.theta_hat);
      rate.zeta = -(1.0 + g.theta_hat[3] * acc_norm * r_norm) * g.zeta + cfg.eps_bar;
      rate.gamma = 0.0;
    } else {
      rate.theta_hat.setZero();
      rate.zeta = 0.0;
      rate.gamma =
          -(1.0 + 0.5 * modes[s].varrho * g.theta_hat.squaredNorm()) * g.gamma + cfg.eps;
    }
  }
  return rates;
}

}  // namespace switchquad::control
