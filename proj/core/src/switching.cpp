#include "switchquad/switching.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include <fmt/core.h>

#include "switchquad/error.hpp"

namespace switchquad::switching {
namespace {

// Slack for the ADT inequality so that exact-boundary schedules (e.g. period == vartheta)
// are not rejected by rounding in (t2 - t1) / vartheta.
constexpr double kAdtSlack = 1e-9;

std::string path_of(std::size_t i) { return "switching.schedule[" + std::to_string(i) + "]"; }

}  // namespace

std::size_t SwitchSchedule::mode_at(double t) const {
  if (events.empty()) throw std::logic_error("mode_at: empty schedule");
  auto it = std::upper_bound(events.begin(), events.end(), t,
                             [](double v, const SwitchEvent& e) { return v < e.time; });
  if (it == events.begin()) return events.front().mode;
  return std::prev(it)->mode;
}

void validate(const SwitchSchedule& schedule, std::size_t mode_count) {
  if (schedule.events.empty()) throw ConfigError("switching.schedule", "must contain the initial mode");
  if (!std::isfinite(schedule.horizon_end) || !(schedule.horizon_end > schedule.start())) {
    throw ConfigError("switching.schedule", "horizon must end after the start time");
  }
  for (std::size_t i = 0; i < schedule.events.size(); ++i) {
    const auto& ev = schedule.events[i];
    if (!std::isfinite(ev.time)) throw ConfigError(path_of(i), "time must be finite");
    if (ev.mode >= mode_count) {
      throw ConfigError(path_of(i), fmt::format("sigma {} out of range (have {} modes)",
                                                ev.mode + 1, mode_count));
    }
    if (i == 0) continue;
    const auto& prev = schedule.events[i - 1];
    if (!(ev.time > prev.time)) throw ConfigError(path_of(i), "switch times must strictly increase");
    if (ev.mode == prev.mode) throw ConfigError(path_of(i), "consecutive entries repeat the same mode");
    if (ev.time > schedule.horizon_end) throw ConfigError(path_of(i), "switch after horizon end");
  }
}

std::size_t count_switches(const SwitchSchedule& schedule, double t1, double t2) {
  if (schedule.events.empty()) return 0;
  if (!(t1 <= t2) || t1 < schedule.start() || t2 > schedule.horizon_end) {
    throw std::out_of_range(fmt::format("count_switches: window [{}, {}) outside horizon [{}, {}]",
                                        t1, t2, schedule.start(), schedule.horizon_end));
  }
  const auto first = schedule.events.begin() + 1;
  const auto lo = std::lower_bound(first, schedule.events.end(), t1,
                                   [](const SwitchEvent& e, double v) { return e.time < v; });
  const auto hi = std::lower_bound(first, schedule.events.end(), t2,
                                   [](const SwitchEvent& e, double v) { return e.time < v; });
  return static_cast<std::size_t>(hi - lo);
}

AdtCertificate adt_certify(const SwitchSchedule& schedule, double vartheta, double n0) {
  if (!(vartheta > 0.0) || !(n0 > 0.0)) {
    throw std::invalid_argument("adt_certify: vartheta and N0 must be positive");
  }
  AdtCertificate cert;
  const std::size_t n = schedule.switch_count();
  double worst = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i <= n; ++i) {
    const double t1 = schedule.events[i].time;
    for (std::size_t j = i; j <= n; ++j) {
      const double t2 = schedule.events[j].time;
      const auto count = j - i + 1;
      const double allowed = n0 + (t2 - t1) / vartheta;
      const double excess = static_cast<double>(count) - allowed;
      if (excess > kAdtSlack && excess > worst) {
        worst = excess;
        cert.certified = false;
        cert.witness = AdtWindow{t1, t2, count, allowed};
      }
    }
  }
  return cert;
}

AdtThreshold adt_threshold(std::span<const Eigen::MatrixXd> p_list,
                           std::span<const Eigen::MatrixXd> q_list, double kappa_fraction) {
  if (p_list.empty() || p_list.size() != q_list.size()) {
    throw std::invalid_argument("adt_threshold: need one Q per P and at least one mode");
  }
  if (!(kappa_fraction > 0.0 && kappa_fraction < 1.0)) {
    throw std::invalid_argument("adt_threshold: kappa_fraction must lie in (0, 1)");
  }
  AdtThreshold out;
  out.p_max = 0.0;
  out.p_min = std::numeric_limits<double>::infinity();
  out.varrho = std::numeric_limits<double>::infinity();
  for (std::size_t s = 0; s < p_list.size(); ++s) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> pe(p_list[s], Eigen::EigenvaluesOnly);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> qe(q_list[s], Eigen::EigenvaluesOnly);
    const double lo = pe.eigenvalues().minCoeff();
    const double hi = pe.eigenvalues().maxCoeff();
    const double q_lo = qe.eigenvalues().minCoeff();
    if (!(lo > 0.0) || !(q_lo > 0.0)) {
      throw std::invalid_argument("adt_threshold: P and Q must be positive definite");
    }
    out.mode_p_min.push_back(lo);
    out.mode_p_max.push_back(hi);
    out.p_max = std::max(out.p_max, hi);
    out.p_min = std::min(out.p_min, lo);
    out.varrho = std::min(out.varrho, q_lo / hi);
  }
  // When every mode shares the same P the Lyapunov function is common and does not jump.
  const bool common = std::all_of(p_list.begin(), p_list.end(),
                                  [&](const Eigen::MatrixXd& p) { return p == p_list.front(); });
  out.mu = common ? 1.0 : out.p_max / out.p_min;
  out.kappa = kappa_fraction * out.varrho;
  out.vartheta_star = std::log(out.mu) / out.kappa;
  return out;
}

SwitchSchedule generate_schedule(const SchedulePattern& pattern, double vartheta, double n0,
                                 double start, double horizon_end,
                                 std::span<const std::size_t> mode_cycle) {
  SwitchSchedule schedule;
  schedule.horizon_end = horizon_end;
  schedule.vartheta = vartheta;
  schedule.n0 = n0;

  auto cyclic = [&](std::vector<double> times) {
    if (mode_cycle.empty()) throw ConfigError("switching.modes", "mode cycle is empty");
    if (mode_cycle.size() == 1 && !times.empty()) {
      throw ConfigError("switching.modes", "need at least two modes to switch");
    }
    schedule.events.push_back({start, mode_cycle[0]});
    for (std::size_t k = 0; k < times.size(); ++k) {
      schedule.events.push_back({times[k], mode_cycle[(k + 1) % mode_cycle.size()]});
    }
  };

  std::visit(
      [&](const auto& p) {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, PeriodicPattern>) {
          if (!(p.period > 0.0)) throw ConfigError("switching.pattern.period", "must be > 0");
          std::vector<double> times;
          for (int k = 1;; ++k) {
            const double t = start + k * p.period;
            if (t >= horizon_end) break;
            times.push_back(t);
          }
          cyclic(std::move(times));
        } else if constexpr (std::is_same_v<T, BurstThenSlowPattern>) {
          if (!(p.burst_start > start)) {
            throw ConfigError("switching.pattern.burst_start", "must be after the start time");
          }
          if (p.burst_count > 1 && !(p.burst_spacing > 0.0)) {
            throw ConfigError("switching.pattern.burst_spacing", "must be > 0");
          }
          if (!(p.slow_gap > 0.0)) throw ConfigError("switching.pattern.slow_gap", "must be > 0");
          std::vector<double> times;
          double last = p.burst_start;
          for (std::size_t i = 0; i < p.burst_count; ++i) {
            last = p.burst_start + static_cast<double>(i) * p.burst_spacing;
            if (last >= horizon_end) break;
            times.push_back(last);
          }
          for (int k = 1;; ++k) {
            const double t = last + k * p.slow_gap;
            if (t >= horizon_end) break;
            times.push_back(t);
          }
          cyclic(std::move(times));
        } else {
          if (p.events.empty() || p.events.front().time != start) {
            throw ConfigError("switching.schedule", "first entry must give the mode at the start time");
          }
          schedule.events = p.events;
        }
      },
      pattern);

  const std::size_t mode_bound = [&] {
    std::size_t m = 0;
    for (const auto& e : schedule.events) m = std::max(m, e.mode + 1);
    return m;
  }();
  validate(schedule, mode_bound);

  const AdtCertificate cert = adt_certify(schedule, vartheta, n0);
  if (!cert.certified) {
    const auto& w = *cert.witness;
    throw AdtViolation(fmt::format(
        "ADT violated: {} switches in window [{:.6g}, {:.6g}] exceed N0 + len/vartheta = {:.6g}",
        w.count, w.t1, w.t2, w.allowed));
  }
  return schedule;
}

}  // namespace switchquad::switching
