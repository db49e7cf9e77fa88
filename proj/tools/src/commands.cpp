#include "commands.hpp"

#include <cmath>
#include <fstream>
#include <iterator>
#include <vector>

#include <fmt/format.h>
#include <fmt/ostream.h>

#include "switchquad/error.hpp"
#include "switchquad/monitors.hpp"
#include "switchquad/presets.hpp"
#include "switchquad/scenario_io.hpp"
#include "switchquad/trace_io.hpp"

namespace switchquad::cli {
namespace {

std::string quoted(std::string_view s) {
  std::string q = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') q += '\\';
    q += (c == '\n') ? ' ' : c;
  }
  return q + "\"";
}

void report(std::ostream& err, std::string_view kind, std::string_view message,
            std::string_view path = {}) {
  err << "error=" << kind;
  if (!path.empty()) err << " path=" << path;
  err << " message=" << quoted(message) << '\n';
}

// Maps library exceptions to exit codes. Anything unexpected propagates.
template <typename F>
int guarded(std::ostream& err, F&& body) {
  try {
    return body();
  } catch (const ConfigError& e) {
    // ConfigError prefixes its message with the path; report the bare reason separately.
    std::string msg = e.what();
    if (!e.path().empty() && msg.rfind(e.path() + ": ", 0) == 0) msg.erase(0, e.path().size() + 2);
    report(err, "schema", msg, e.path().empty() ? std::string_view{"<root>"} : e.path());
    return kSchema;
  } catch (const AdtViolation& e) {
    report(err, "adt", e.what());
    return kAdt;
  } catch (const SynthesisError& e) {
    report(err, "synthesis", e.what());
    return kSimulation;
  } catch (const SimulationError& e) {
    report(err, "simulation", e.what());
    return kSimulation;
  }
}

switching::AdtThreshold threshold(const sim::Scenario& sc,
                                  std::span<const control::ControllerMode> modes) {
  std::vector<Eigen::MatrixXd> p;
  std::vector<Eigen::MatrixXd> q;
  for (const auto& m : modes) {
    p.emplace_back(m.p);
    q.emplace_back(m.config.q);
  }
  return switching::adt_threshold(p, q, sc.kappa_fraction);
}

// The declared schedule must satisfy its own ADT inequality with a dwell time above the
// stability threshold.
void require_certified(const sim::Scenario& sc, const switching::AdtThreshold& adt) {
  const auto& s = sc.schedule;
  const auto cert = switching::adt_certify(s, s.vartheta, s.n0);
  if (!cert.certified) {
    const auto& w = *cert.witness;
    throw AdtViolation(fmt::format(
        "{} switches in window [{:.6g}, {:.6g}] exceed N0 + length/vartheta = {:.6g}", w.count,
        w.t1, w.t2, w.allowed));
  }
  if (s.switch_count() > 0 && !(s.vartheta > adt.vartheta_star)) {
    throw AdtViolation(fmt::format("declared vartheta {:.6g} does not exceed vartheta* {:.6g}",
                                   s.vartheta, adt.vartheta_star));
  }
}

struct Lines {
  std::string& buf;
  template <typename... Args>
  void operator()(fmt::format_string<Args...> f, Args&&... args) {
    fmt::format_to(std::back_inserter(buf), f, std::forward<Args>(args)...);
    buf += '\n';
  }
};

const char* verdict(bool ok) { return ok ? "PASS" : "FAIL"; }

}  // namespace

sim::Scenario resolve_scenario(const Options& opts) {
  if (opts.config && opts.preset) throw ConfigError("", "give either --config or --preset, not both");
  if (!opts.config && !opts.preset) throw ConfigError("", "one of --config or --preset is required");
  sim::Scenario sc;
  if (opts.preset) {
    try {
      sc = presets::by_name(*opts.preset);
    } catch (const std::invalid_argument& e) {
      throw ConfigError("--preset", e.what());
    }
  } else {
    sc = io::load_scenario(*opts.config);
  }
  if (opts.horizon) sc = io::with_horizon(std::move(sc), *opts.horizon);
  if (opts.step) sc.step = *opts.step;
  sim::validate(sc);
  return sc;
}

int cmd_run(const Options& opts, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const sim::Scenario sc = resolve_scenario(opts);
    const auto modes = sim::synthesize_modes(sc);
    const auto adt = threshold(sc, modes);
    require_certified(sc, adt);

    std::filesystem::create_directories(opts.out);
    sim::SimTrace trace;
    try {
      trace = sim::simulate(sc, modes);
    } catch (const sim::SimulationAborted& e) {
      std::ofstream partial(opts.out / "trace.csv");
      io::write_trace_csv(partial, e.prefix());
      throw;
    }
    {
      std::ofstream csv(opts.out / "trace.csv");
      io::write_trace_csv(csv, trace);
    }
    io::write_plot_data(opts.out / "plots", trace);

    const auto theta_star = sim::theta_star_list(sc);
    const auto jumps = sim::lyapunov_jump_monitor(trace, modes);
    const auto envelope = sim::envelope_monitor(trace, sc, theta_star);
    const auto freeze = sim::gain_freeze_check(trace);
    const auto bounds = sim::gain_bounds_check(trace);
    const double delta1 = sim::delta1_estimate(trace, sc.varpi);
    const auto ub = sim::ultimate_bound(theta_star, modes, adt, sc.schedule.n0, sc.varpi, delta1,
                                        sim::default_gain_floors(modes));
    const auto uub = sim::uub_verdict(trace, ub);

    const double t0 = sc.schedule.start();
    const double settle = std::min(t0 + 20.0, sc.horizon);
    const Vec4 rms = sim::rms_errors(trace, t0, sc.horizon);
    const Vec4 rms_late = sim::rms_errors(trace, settle, sc.horizon);

    bool jumps_ok = true;
    for (const auto& j : jumps) jumps_ok = jumps_ok && j.pass;
    const bool freeze_ok = freeze.active_gamma_drift <= 1e-12 && freeze.inactive_theta_drift <= 1e-12 &&
                           freeze.inactive_zeta_drift <= 1e-12 &&
                           freeze.active_intervals_evolving == freeze.intervals;

    std::string s;
    Lines line{s};
    line("modes: {}", modes.size());
    line("step: {:.6g} s, horizon: [{:.6g}, {:.6g}] s, records: {}", sc.step, t0, sc.horizon,
         trace.records.size());
    line("vartheta*: {:.6g} s (mu {:.6g}, varrho {:.6g}, kappa {:.6g})", adt.vartheta_star, adt.mu,
         adt.varrho, adt.kappa);
    line("declared vartheta: {:.6g} s, N0: {:.6g}, switches: {}", sc.schedule.vartheta,
         sc.schedule.n0, sc.schedule.switch_count());
    line("ADT certified: yes");
    line("rms error (whole run): e_z {:.6g} m, e_phi {:.6g} deg, e_theta {:.6g} deg, e_psi {:.6g} deg",
         rms[0], rms[1], rms[2], rms[3]);
    line("rms error (t >= {:.6g}): e_z {:.6g} m, e_phi {:.6g} deg, e_theta {:.6g} deg, e_psi {:.6g} deg",
         settle, rms_late[0], rms_late[1], rms_late[2], rms_late[3]);
    line("ultimate bound: delta {:.6g}, delta1 {:.6g}, level {:.6g}, b {:.6g}", ub.delta, ub.delta1,
         ub.level, ub.b);
    if (uub.entry_time) {
      line("bound entry time: {:.6g} s, sup ||xi|| after entry {:.6g}", *uub.entry_time, uub.sup_after);
    } else {
      line("bound entry time: never");
    }
    line("monitor jump_condition: {} ({} switches checked)", verdict(jumps_ok), jumps.size());
    line("monitor envelope: {} (max slack {:.6g} at t = {:.6g})", verdict(envelope.holds()),
         envelope.max_slack, envelope.t_at_max);
    line("monitor gain_freeze: {} ({} intervals)", verdict(freeze_ok), freeze.intervals);
    line("monitor gain_bounds: {}", verdict(bounds.pass()));
    line("monitor uub: {}", verdict(uub.pass));

    out << s;
    std::ofstream(opts.out / "summary.txt") << s;
    return kOk;
  });
}

int cmd_adt(const Options& opts, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const sim::Scenario sc = resolve_scenario(opts);
    const auto modes = sim::synthesize_modes(sc);
    const auto adt = threshold(sc, modes);
    out << fmt::format("mu {:.6g}\nvarrho {:.6g}\nkappa {:.6g}\nvartheta_star {:.6g}\n", adt.mu,
                       adt.varrho, adt.kappa, adt.vartheta_star);
    for (std::size_t i = 0; i < modes.size(); ++i) {
      out << fmt::format("mode {} lambda_min(P) {:.6g} lambda_max(P) {:.6g}\n", i + 1,
                         adt.mode_p_min[i], adt.mode_p_max[i]);
    }
    return kOk;
  });
}

int cmd_certify(const Options& opts, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const sim::Scenario sc = resolve_scenario(opts);
    const auto& s = sc.schedule;
    const auto cert = switching::adt_certify(s, s.vartheta, s.n0);
    if (cert.certified) {
      out << fmt::format("certified: yes ({} switches, vartheta {:.6g}, N0 {:.6g})\n",
                         s.switch_count(), s.vartheta, s.n0);
      return kOk;
    }
    const auto& w = *cert.witness;
    out << fmt::format("certified: no\nwitness: t1 {:.6g} t2 {:.6g} count {} allowed {:.6g}\n", w.t1,
                       w.t2, w.count, w.allowed);
    report(err, "adt",
           fmt::format("{} switches in window [{:.6g}, {:.6g}] exceed {:.6g}", w.count, w.t1, w.t2,
                       w.allowed));
    return kAdt;
  });
}

int cmd_preset(const Options& opts, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    Options o = opts;
    if (!o.preset && !o.config) o.preset = "paper_s5";
    out << io::dump_scenario(resolve_scenario(o));
    return kOk;
  });
}

}  // namespace switchquad::cli
