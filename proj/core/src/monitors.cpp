#include "switchquad/monitors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <fmt/core.h>

namespace switchquad::sim {

using control::ControllerMode;

std::vector<JumpCheck> lyapunov_jump_monitor(const SimTrace& trace,
                                             std::span<const ControllerMode> modes) {
  std::vector<Eigen::MatrixXd> p_list;
  std::vector<Eigen::MatrixXd> q_list;
  for (const auto& m : modes) {
    p_list.emplace_back(m.p);
    q_list.emplace_back(m.config.q);
  }
  const double mu = switching::adt_threshold(p_list, q_list, 0.5).mu;

  std::vector<JumpCheck> checks;
  for (std::size_t k = 1; k < trace.records.size(); ++k) {
    const TraceRecord& prev = trace.records[k - 1];
    const TraceRecord& cur = trace.records[k];
    if (cur.sigma == prev.sigma) continue;
    JumpCheck c;
    c.t = cur.t;
    c.from = prev.sigma;
    c.to = cur.sigma;
    c.v_before = 0.5 * cur.xi.dot(modes[c.from].p * cur.xi);
    c.v_after = 0.5 * cur.xi.dot(modes[c.to].p * cur.xi);
    c.bound = mu * c.v_before;
    c.pass = c.v_after <= c.bound * (1.0 + 1e-9);
    checks.push_back(c);
  }
  return checks;
}

std::vector<Vec4> theta_star_list(const Scenario& scenario) {
  const double qd_dot_sup = scenario.trajectory.velocity_bound();
  std::vector<Vec4> out;
  for (std::size_t s = 0; s < scenario.subsystems.size(); ++s) {
    out.push_back(dynamics::theta_star_oracle(scenario.subsystems[s],
                                              scenario.controllers[s].d_diag, qd_dot_sup));
  }
  return out;
}

Vec4 lumped_uncertainty(const TraceRecord& rec, const dynamics::SubsystemParams& params,
                        const Vec4& d_diag) {
  const dynamics::CollocatedMatrices mats = dynamics::collocated_matrices(rec.state, params);
  const Vec4 q_ddot = rec.state.q_ddot_bar.head<4>();
  const Vec2 q_u_ddot = rec.state.q_ddot_bar.tail<2>();
  const Mat4 d = d_diag.asDiagonal();
  const Vec4 e = (mats.m - d) * q_ddot + mats.c * rec.state.q_dot + mats.g + mats.h * q_u_ddot +
                 rec.disturbance;
  return -e.cwiseQuotient(d_diag);
}

EnvelopeReport envelope_monitor(const SimTrace& trace, const Scenario& scenario,
                                std::span<const Vec4> theta_star, double scale) {
  EnvelopeReport rep;
  rep.max_slack = -std::numeric_limits<double>::infinity();
  for (const TraceRecord& rec : trace.records) {
    const Vec4 chi = lumped_uncertainty(rec, scenario.subsystems[rec.sigma],
                                        scenario.controllers[rec.sigma].d_diag);
    const Vec4 y = control::regressor(rec.xi, rec.state.q_ddot_bar);
    const double envelope = scale * y.dot(theta_star[rec.sigma]);
    const double slack = chi.norm() - envelope;
    if (slack > rep.max_slack) {
      rep.max_slack = slack;
      rep.t_at_max = rec.t;
    }
    rep.max_ratio = std::max(rep.max_ratio, chi.norm() / envelope);
  }
  return rep;
}

double error_dynamics_residual(const SimTrace& trace, const Scenario& scenario) {
  double worst = 0.0;
  for (const TraceRecord& rec : trace.records) {
    const control::ModeConfig& cfg = scenario.controllers[rec.sigma];
    const Vec4 chi = lumped_uncertainty(rec, scenario.subsystems[rec.sigma], cfg.d_diag);
    const Vec4 e_ddot = rec.state.q_ddot_bar.head<4>() - rec.desired.q_ddot;
    const Vec4 predicted =
        -cfg.k1 * rec.xi.head<4>() - cfg.k2 * rec.xi.tail<4>() - rec.delta + chi;
    worst = std::max(worst, (e_ddot - predicted).cwiseAbs().maxCoeff());
  }
  return worst;
}

GainFloors default_gain_floors(std::span<const ControllerMode> modes) {
  GainFloors f{std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
  for (const auto& m : modes) {
    f.zeta = std::min(f.zeta, m.config.eps_bar);
    f.gamma = std::min(f.gamma, m.config.eps);
  }
  return f;
}

UltimateBound ultimate_bound(std::span<const Vec4> theta_star,
                             std::span<const ControllerMode> modes,
                             const switching::AdtThreshold& adt, double n0, double varpi,
                             double delta1, const GainFloors& floors) {
  if (theta_star.size() != modes.size()) {
    throw std::invalid_argument("ultimate_bound: one Theta* per mode required");
  }
  double active_term = 0.0;
  double sum_term = 0.0;
  for (std::size_t p = 0; p < modes.size(); ++p) {
    const control::ModeConfig& cfg = modes[p].config;
    const double varrho_p = modes[p].varrho;
    double acc = 0.0;
    for (int i = 0; i < 4; ++i) {
      const double alpha_bar = cfg.alpha[i] - 0.5 * varrho_p;
      if (!(alpha_bar > 0.0)) {
        throw ConfigError(fmt::format("controller[{}].alpha[{}]", p, i),
                          "alpha must exceed varrho/2 for the ultimate bound");
      }
      const double a = cfg.alpha[i] * theta_star[p][i];
      acc += a * a / (4.0 * alpha_bar);
    }
    active_term = std::max(active_term, acc + cfg.eps_bar / floors.zeta);

    sum_term += 0.5 * varrho_p * theta_star[p].squaredNorm() +
                varrho_p * cfg.initial.gamma / floors.gamma +
                varrho_p * cfg.initial.zeta / floors.zeta + cfg.eps / floors.gamma;
  }

  UltimateBound out;
  out.delta = active_term + sum_term;
  out.delta1 = delta1;
  const double margin = adt.varrho - adt.kappa;
  const double drive = out.delta + varpi * delta1;
  out.level = drive / margin;
  out.b = std::sqrt(2.0 * std::pow(adt.p_max, n0 + 1.0) * drive /
                    (std::pow(adt.p_min, n0 + 2.0) * margin));
  return out;
}

double delta1_estimate(const SimTrace& trace, double varpi) {
  double best = 0.0;
  for (const TraceRecord& rec : trace.records) {
    if (!(rec.r.norm() < varpi)) continue;
    const double n = rec.xi.norm();
    const Vec4& th = rec.gains[rec.sigma].theta_hat;
    best = std::max(best, th[0] + th[1] * n + th[2] * n * n);
  }
  return best;
}

UubVerdict uub_verdict(const SimTrace& trace, const UltimateBound& bound, double hold) {
  UubVerdict v;
  v.b = bound.b;
  const auto& recs = trace.records;
  std::optional<std::size_t> candidate;
  std::optional<std::size_t> entry;
  for (std::size_t k = 0; k < recs.size(); ++k) {
    if (recs[k].v_quad < bound.level) {
      if (!candidate) candidate = k;
      if (recs[k].t - recs[*candidate].t >= hold) {
        entry = candidate;
        break;
      }
    } else {
      candidate.reset();
    }
  }
  if (!entry) return v;
  v.entry_time = recs[*entry].t;
  for (std::size_t k = *entry; k < recs.size(); ++k) {
    v.sup_after = std::max(v.sup_after, recs[k].xi.norm());
  }
  v.pass = v.sup_after <= v.b;
  return v;
}

namespace {

template <typename Fn>
void for_window(const SimTrace& trace, double t_begin, double t_end, Fn&& fn) {
  std::size_t n = 0;
  for (const TraceRecord& rec : trace.records) {
    if (rec.t < t_begin || rec.t > t_end) continue;
    Vec4 e = rec.xi.head<4>();
    e.tail<3>() *= kRadToDeg;
    fn(e);
    ++n;
  }
  if (n == 0) {
    throw std::invalid_argument(fmt::format("empty window [{}, {}]", t_begin, t_end));
  }
}

}  // namespace

Vec4 rms_errors(const SimTrace& trace, double t_begin, double t_end) {
  Vec4 sum = Vec4::Zero();
  double n = 0.0;
  for_window(trace, t_begin, t_end, [&](const Vec4& e) {
    sum += e.cwiseProduct(e);
    n += 1.0;
  });
  return (sum / n).cwiseSqrt();
}

Vec4 max_abs_errors(const SimTrace& trace, double t_begin, double t_end) {
  Vec4 worst = Vec4::Zero();
  for_window(trace, t_begin, t_end, [&](const Vec4& e) { worst = worst.cwiseMax(e.cwiseAbs()); });
  return worst;
}

GainFreezeReport gain_freeze_check(const SimTrace& trace) {
  GainFreezeReport rep;
  const auto& recs = trace.records;
  std::size_t begin = 0;
  while (begin < recs.size()) {
    std::size_t end = begin;
    while (end + 1 < recs.size() && recs[end + 1].sigma == recs[begin].sigma) ++end;
    // The step leaving the last record of the interval is still integrated under this mode.
    const std::size_t last = std::min(end + 1, recs.size() - 1);
    const std::size_t p = recs[begin].sigma;
    const auto& g0 = recs[begin].gains;
    bool evolving = false;
    for (std::size_t k = begin; k <= last; ++k) {
      const auto& g = recs[k].gains;
      for (std::size_t m = 0; m < g.size(); ++m) {
        if (m == p) {
          rep.active_gamma_drift = std::max(rep.active_gamma_drift, std::abs(g[m].gamma - g0[m].gamma));
          if (g[m].theta_hat != g0[m].theta_hat || g[m].zeta != g0[m].zeta) evolving = true;
        } else {
          rep.inactive_theta_drift = std::max(
              rep.inactive_theta_drift, (g[m].theta_hat - g0[m].theta_hat).cwiseAbs().maxCoeff());
          rep.inactive_zeta_drift =
              std::max(rep.inactive_zeta_drift, std::abs(g[m].zeta - g0[m].zeta));
        }
      }
    }
    ++rep.intervals;
    if (evolving) ++rep.active_intervals_evolving;
    begin = end + 1;
  }
  return rep;
}

GainBoundsReport gain_bounds_check(const SimTrace& trace) {
  GainBoundsReport rep;
  if (trace.records.empty()) return rep;
  rep.min_theta_hat = std::numeric_limits<double>::infinity();
  rep.min_zeta = std::numeric_limits<double>::infinity();
  rep.min_gamma = std::numeric_limits<double>::infinity();
  const auto& initial = trace.records.front().gains;
  for (const TraceRecord& rec : trace.records) {
    for (std::size_t m = 0; m < rec.gains.size(); ++m) {
      const auto& g = rec.gains[m];
      rep.min_theta_hat = std::min(rep.min_theta_hat, g.theta_hat.minCoeff());
      rep.min_zeta = std::min(rep.min_zeta, g.zeta);
      rep.min_gamma = std::min(rep.min_gamma, g.gamma);
      if (g.zeta > initial[m].zeta) rep.zeta_within_initial = false;
      if (g.gamma > initial[m].gamma) rep.gamma_within_initial = false;
    }
  }
  return rep;
}

}  // namespace switchquad::sim
