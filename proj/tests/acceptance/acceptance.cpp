// Acceptance suite: one PASS/FAIL line per criterion. Exit status is the number of failures.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>

#include <fmt/core.h>
#include <unsupported/Eigen/KroneckerProduct>

#include "commands.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"
#include "switchquad/lyapunov.hpp"
#include "switchquad/monitors.hpp"
#include "switchquad/presets.hpp"

using namespace switchquad;
using Clock = std::chrono::steady_clock;

namespace {

struct Verdict {
  bool pass;
  std::string detail;
};

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

switching::AdtThreshold threshold_of(std::span<const control::ControllerMode> modes, double kf) {
  std::vector<Eigen::MatrixXd> p, q;
  for (const auto& m : modes) {
    p.emplace_back(m.p);
    q.emplace_back(m.config.q);
  }
  return switching::adt_threshold(p, q, kf);
}

// The 100 s reproduction run shared by criteria 3 to 7 and 10.
struct Reproduction {
  sim::Scenario scenario;
  sim::SimTrace trace;
  double runtime = 0.0;
  std::string failure;
};

const Reproduction& reproduction() {
  static const Reproduction run = [] {
    Reproduction r;
    r.scenario = presets::paper_s5();
    const auto t0 = Clock::now();
    try {
      r.trace = sim::simulate(r.scenario);
    } catch (const Error& e) {
      r.failure = e.what();
    }
    r.runtime = seconds_since(t0);
    return r;
  }();
  return run;
}

Verdict adt_threshold_reproduction() {
  cli::Options opts;
  opts.preset = "paper_s5";
  std::ostringstream out, err;
  const auto t0 = Clock::now();
  const int code = cli::cmd_adt(opts, out, err);
  const double runtime = seconds_since(t0);

  const sim::Scenario sc = presets::paper_s5();
  const auto adt = threshold_of(sim::synthesize_modes(sc), sc.kappa_fraction);
  const auto ref = oracle::adt_from_scalar_gains({{120, 100}, {150, 120}, {200, 140}}, 2.0, 0.9);
  const double rel = std::abs(adt.vartheta_star - ref.vartheta_star) / ref.vartheta_star;
  const double gap = std::abs(ref.vartheta_star - 6.57) / 6.57;
  const bool printed = out.str().find(fmt::format("vartheta_star {:.6g}\n", adt.vartheta_star)) !=
                       std::string::npos;
  return {code == 0 && printed && rel < 1e-9 && gap < 0.05 && runtime < 1.0,
          fmt::format("vartheta*={:.10g} oracle={:.10g} rel={:.2e}; published 6.57 gap {:.2f}%; {:.3f} s",
                      adt.vartheta_star, ref.vartheta_star, rel, 100.0 * gap, runtime)};
}

Verdict lyapunov_solver() {
  double worst_residual = 0.0, worst_oracle = 0.0;
  for (auto [k1, k2] : {std::pair{120.0, 100.0}, {150.0, 120.0}, {200.0, 140.0}}) {
    const Mat8 a = control::build_closed_loop(k1 * Mat4::Identity(), k2 * Mat4::Identity());
    const Mat8 q = 2.0 * Mat8::Identity();
    const Eigen::MatrixXd p = control::solve_lyapunov(a, q);
    worst_residual = std::max(worst_residual, control::lyapunov_residual(a, p, q));
    const auto ref = oracle::lyapunov_2x2(k1, k2, 2.0);
    Eigen::Matrix2d block;
    block << ref.a, ref.b, ref.b, ref.c;
    Mat8 expect = Eigen::kroneckerProduct(block, Mat4::Identity());
    worst_oracle = std::max(worst_oracle, (p - expect).cwiseAbs().maxCoeff());
  }
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> u(-1.0, 1.0), e(0.5, 250.0);
  auto random_spd = [&] {
    Mat4 m;
    for (int i = 0; i < 16; ++i) m(i) = u(rng);
    const Mat4 basis = Eigen::HouseholderQR<Mat4>(m).householderQ();
    const Vec4 d(e(rng), e(rng), e(rng), e(rng));
    return Mat4(basis * d.asDiagonal() * basis.transpose());
  };
  double worst_random = 0.0;
  for (int i = 0; i < 100; ++i) {
    const Mat8 a = control::build_closed_loop(random_spd(), random_spd());
    const Mat8 q = 2.0 * Mat8::Identity();
    worst_random = std::max(worst_random, control::lyapunov_residual(a, control::solve_lyapunov(a, q), q));
  }
  return {worst_residual < 1e-10 && worst_random < 1e-10 && worst_oracle < 1e-12,
          fmt::format("reference modes residual {:.2e}, 100 random residual {:.2e}, closed-form match {:.2e}",
                      worst_residual, worst_random, worst_oracle)};
}

Verdict reproduction_tracking() {
  const Reproduction& r = reproduction();
  if (!r.failure.empty()) return {false, "run aborted: " + r.failure};
  const auto& sc = r.scenario;
  const auto cert = switching::adt_certify(sc.schedule, sc.schedule.vartheta, sc.schedule.n0);
  const auto adt = threshold_of(r.trace.modes, sc.kappa_fraction);
  const bool certified = cert.certified && sc.schedule.vartheta > adt.vartheta_star;

  bool finite = true;
  for (const auto& rec : r.trace.records) finite = finite && rec.xi.allFinite();
  const Vec4 early = sim::max_abs_errors(r.trace, 0.0, 50.0);
  const Vec4 late = sim::max_abs_errors(r.trace, 50.0, 100.0);
  const bool bounded = finite && (late.array() <= early.array()).all();
  const Vec4 after = sim::max_abs_errors(r.trace, 20.0, 100.0);
  const double att = after.tail<3>().maxCoeff();
  return {certified && bounded && after[0] <= 0.05 && att < 5.0 && r.runtime < 30.0,
          fmt::format("certified={} bounded={} max|e_z|(t>=20)={:.4f} m, max attitude error(t>=20)={:.3f} deg, "
                      "{} switches, {:.2f} s",
                      certified, bounded, after[0], att, sc.schedule.switch_count(), r.runtime)};
}

Verdict gain_update_semantics() {
  const Reproduction& r = reproduction();
  if (!r.failure.empty()) return {false, "run aborted"};
  const auto rep = sim::gain_freeze_check(r.trace);
  const bool ok = rep.active_gamma_drift <= 1e-12 && rep.inactive_theta_drift <= 1e-12 &&
                  rep.inactive_zeta_drift <= 1e-12 && rep.active_intervals_evolving == rep.intervals;
  return {ok, fmt::format("{} intervals; active gamma drift {:.1e}, inactive theta drift {:.1e}, "
                          "inactive zeta drift {:.1e}; active theta/zeta evolving in {}/{}",
                          rep.intervals, rep.active_gamma_drift, rep.inactive_theta_drift,
                          rep.inactive_zeta_drift, rep.active_intervals_evolving, rep.intervals)};
}

Verdict jump_condition() {
  const Reproduction& r = reproduction();
  if (!r.failure.empty()) return {false, "run aborted"};
  const auto checks = sim::lyapunov_jump_monitor(r.trace, r.trace.modes);
  std::size_t passed = 0;
  double worst = 0.0;
  for (const auto& c : checks) {
    passed += c.pass;
    if (c.bound > 0.0) worst = std::max(worst, c.v_after / c.bound);
  }
  return {!checks.empty() && passed == checks.size(),
          fmt::format("{}/{} switches satisfy V+ <= mu V-; largest V+/(mu V-) = {:.3e}", passed,
                      checks.size(), worst)};
}

Verdict uncertainty_envelope() {
  const Reproduction& r = reproduction();
  if (!r.failure.empty()) return {false, "run aborted"};
  const auto theta = sim::theta_star_list(r.scenario);
  const auto full = sim::envelope_monitor(r.trace, r.scenario, theta);
  const auto shrunk = sim::envelope_monitor(r.trace, r.scenario, theta, 0.1);
  return {full.holds() && !shrunk.holds(),
          fmt::format("max slack {:.4g} (max ||chi||/Y'Theta* = {:.3e}); 10x-shrunk control: max slack "
                      "{:.4g} -> {}",
                      full.max_slack, full.max_ratio, shrunk.max_slack,
                      shrunk.holds() ? "no violation reported" : "violation reported")};
}

Verdict ultimate_bound() {
  const Reproduction& r = reproduction();
  if (!r.failure.empty()) return {false, "run aborted"};
  const auto& sc = r.scenario;
  const auto& modes = r.trace.modes;
  const auto adt = threshold_of(modes, sc.kappa_fraction);
  const double delta1 = sim::delta1_estimate(r.trace, sc.varpi);
  const auto ub = sim::ultimate_bound(sim::theta_star_list(sc), modes, adt, sc.schedule.n0, sc.varpi,
                                      delta1, sim::default_gain_floors(modes));
  const auto uub = sim::uub_verdict(r.trace, ub);
  double sup_late = 0.0;
  for (const auto& rec : r.trace.records) {
    if (rec.t >= 20.0) sup_late = std::max(sup_late, rec.xi.norm());
  }
  return {uub.pass && ub.b > sup_late,
          fmt::format("b={:.4g} level={:.4g} delta1={:.4g}; T1={} sup||xi|| after T1 {:.4g}, after 20 s {:.4g}",
                      ub.b, ub.level, delta1, uub.entry_time ? fmt::format("{:.3f}", *uub.entry_time) : "none",
                      uub.sup_after, sup_late)};
}

Verdict adt_certifier() {
  std::mt19937_64 rng(77);
  std::uniform_int_distribution<int> count(0, 14), slot(1, 99), dwell(1, 40), chatter(1, 3);
  int disagreements = 0, violations = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    std::vector<int> slots;
    for (int i = count(rng); i > 0; --i) slots.push_back(slot(rng));
    std::sort(slots.begin(), slots.end());
    slots.erase(std::unique(slots.begin(), slots.end()), slots.end());
    const int vt = dwell(rng), n0 = chatter(rng);
    switching::SwitchSchedule s;
    s.events.push_back({0.0, 0});
    std::vector<std::int64_t> ms;
    for (std::size_t i = 0; i < slots.size(); ++i) {
      s.events.push_back({slots[i] / 100.0, (i + 1) % 2});
      ms.push_back(10 * slots[i]);
    }
    s.horizon_end = 1.0;
    const bool lib = switching::adt_certify(s, vt / 100.0, n0).certified;
    const bool ref = oracle::adt_dense_ok(ms, 1000, 10 * vt, n0);
    disagreements += lib != ref;
    violations += !ref;
  }
  return {disagreements == 0,
          fmt::format("1000 random schedules ({} violating), {} disagreements with 1 ms brute force",
                      violations, disagreements)};
}

Verdict plant_invariants() {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> ang(-kPi, kPi), u(-20.0, 20.0);
  double worst_orth = 0.0, worst_det = 0.0;
  for (int i = 0; i < 10000; ++i) {
    const Mat3 r = dynamics::rotation_matrix(ang(rng), ang(rng), ang(rng));
    worst_orth = std::max(worst_orth, (r.transpose() * r - Mat3::Identity()).cwiseAbs().maxCoeff());
    worst_det = std::max(worst_det, std::abs(r.determinant() - 1.0));
  }
  double worst_form = 0.0;
  const auto subsystems = presets::paper_s5().subsystems;
  for (int i = 0; i < 1000; ++i) {
    const auto& params = subsystems[static_cast<std::size_t>(i) % subsystems.size()];
    const dynamics::PlantState s = fixtures::random_state(rng);
    const Vec4 tau(u(rng) + 20.0, u(rng), u(rng), u(rng));
    const Vec4 d(u(rng), u(rng), u(rng), u(rng));
    const auto acc = dynamics::plant_accels(s, tau, params, d);
    const auto m = dynamics::collocated_matrices(s, params);
    const Vec4 lhs = m.m * acc.q_ddot + m.c * s.q_dot + m.g + m.h * acc.q_u_ddot;
    worst_form = std::max(worst_form, (lhs - (tau - d)).cwiseAbs().maxCoeff());
  }
  return {worst_orth < 1e-10 && worst_det < 1e-10 && worst_form < 1e-8,
          fmt::format("orthonormality {:.2e}, |det-1| {:.2e} over 1e4 samples; six-DoF vs collocated "
                      "residual {:.2e} over 1e3 states",
                      worst_orth, worst_det, worst_form)};
}

Verdict determinism_and_convergence() {
  const Reproduction& r = reproduction();
  if (!r.failure.empty()) return {false, "run aborted"};
  const sim::SimTrace again = sim::simulate(r.scenario);
  bool identical = again.records.size() == r.trace.records.size();
  for (std::size_t k = 0; identical && k < again.records.size(); ++k) {
    const auto& a = again.records[k];
    const auto& b = r.trace.records[k];
    identical = a.t == b.t && a.sigma == b.sigma && a.xi == b.xi && a.tau == b.tau &&
                a.state.q_u == b.state.q_u && a.gains == b.gains && a.v_quad == b.v_quad;
  }
  sim::Scenario half = r.scenario;
  half.step = 0.5 * r.scenario.step;
  const double xi_h = r.trace.records.back().xi.norm();
  const double xi_half = sim::simulate(half).records.back().xi.norm();
  const double change = std::abs(xi_h - xi_half);
  return {identical && change < 1e-4,
          fmt::format("rerun bit-identical={}; terminal ||xi|| {:.12g} (h) vs {:.12g} (h/2), change {:.2e}",
                      identical, xi_h, xi_half, change)};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Verdict()>>> criteria{
      {"ADT threshold reproduction", adt_threshold_reproduction},
      {"Lyapunov solver", lyapunov_solver},
      {"Reference scenario reproduction", reproduction_tracking},
      {"Gain-update semantics", gain_update_semantics},
      {"Lyapunov jump condition", jump_condition},
      {"Uncertainty envelope", uncertainty_envelope},
      {"Ultimate bound", ultimate_bound},
      {"ADT certifier", adt_certifier},
      {"Plant invariants", plant_invariants},
      {"Determinism and convergence", determinism_and_convergence},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Verdict v;
    try {
      v = criteria[i].second();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    failures += !v.pass;
    std::printf("%s %2zu %s: %s\n", v.pass ? "PASS" : "FAIL", i + 1, criteria[i].first, v.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures;
}
