#include "switchquad/scenario_io.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <type_traits>
#include <variant>

#include <fmt/core.h>
#include <json.hpp>

#include "switchquad/error.hpp"

namespace switchquad::io {
namespace {

using nlohmann::json;
using control::ModeConfig;
using dynamics::SubsystemParams;

// ---------------------------------------------------------------------------------------------
// Reading helpers. Every accessor carries the JSON path for error messages.

const json& require(const json& obj, const std::string& key, const std::string& path) {
  if (!obj.is_object()) throw ConfigError(path, "expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) throw ConfigError(path.empty() ? key : path + "." + key, "missing required field");
  return *it;
}

std::string join(const std::string& path, const std::string& key) {
  return path.empty() ? key : path + "." + key;
}

double as_number(const json& v, const std::string& path) {
  if (!v.is_number()) throw ConfigError(path, "expected a number");
  return v.get<double>();
}

double number(const json& obj, const std::string& key, const std::string& path) {
  return as_number(require(obj, key, path), join(path, key));
}

double number_or(const json& obj, const std::string& key, const std::string& path, double fallback) {
  if (!obj.contains(key)) return fallback;
  return as_number(obj.at(key), join(path, key));
}

template <int N>
Eigen::Matrix<double, N, 1> vector_of(const json& v, const std::string& path) {
  Eigen::Matrix<double, N, 1> out;
  if (v.is_number()) {
    out.setConstant(v.get<double>());
    return out;
  }
  if (!v.is_array() || v.size() != static_cast<std::size_t>(N)) {
    throw ConfigError(path, fmt::format("expected a number or an array of {} numbers", N));
  }
  for (int i = 0; i < N; ++i) out[i] = as_number(v[i], fmt::format("{}[{}]", path, i));
  return out;
}

// number -> c I, flat array -> diagonal, nested array -> full matrix.
template <int N>
Eigen::Matrix<double, N, N> matrix_of(const json& v, const std::string& path) {
  using Mat = Eigen::Matrix<double, N, N>;
  if (v.is_number()) return v.get<double>() * Mat::Identity();
  if (v.is_array() && v.size() == static_cast<std::size_t>(N) && !v.empty() && v[0].is_array()) {
    Mat out;
    for (int i = 0; i < N; ++i) {
      const std::string row_path = fmt::format("{}[{}]", path, i);
      if (!v[i].is_array() || v[i].size() != static_cast<std::size_t>(N)) {
        throw ConfigError(row_path, fmt::format("expected a row of {} numbers", N));
      }
      for (int j = 0; j < N; ++j) out(i, j) = as_number(v[i][j], fmt::format("{}[{}]", row_path, j));
    }
    return out;
  }
  return vector_of<N>(v, path).asDiagonal();
}

std::size_t sigma_of(const json& v, const std::string& path) {
  if (!v.is_number_integer() || v.get<long long>() < 1) {
    throw ConfigError(path, "sigma must be a positive integer (modes are numbered from 1)");
  }
  return static_cast<std::size_t>(v.get<long long>() - 1);
}

DisturbanceTerm parse_term(const json& t, const std::string& path) {
  const json& type = require(t, "type", path);
  if (type == "sinusoid") {
    return Sinusoid{number(t, "amplitude", path), number(t, "frequency", path),
                    number_or(t, "phase", path, 0.0)};
  }
  if (type == "pulse") {
    PulseTrain p;
    p.amplitude = number(t, "amplitude", path);
    p.start = number(t, "start", path);
    p.width = number(t, "width", path);
    p.period = number_or(t, "period", path, 0.0);
    const double count = number_or(t, "count", path, 1.0);
    if (count < 0.0 || count != static_cast<double>(static_cast<int>(count))) {
      throw ConfigError(join(path, "count"), "must be a non-negative integer");
    }
    p.count = static_cast<int>(count);
    return p;
  }
  throw ConfigError(join(path, "type"), "unknown disturbance type (expected sinusoid or pulse)");
}

DisturbanceSpec parse_disturbance(const json& v, const std::string& path) {
  DisturbanceSpec spec;
  if (!v.is_array() || v.size() != 4) {
    throw ConfigError(path, "expected an array of 4 channels (thrust, roll, pitch, yaw)");
  }
  for (int ch = 0; ch < 4; ++ch) {
    const std::string ch_path = fmt::format("{}[{}]", path, ch);
    if (!v[ch].is_array()) throw ConfigError(ch_path, "expected an array of terms");
    for (std::size_t i = 0; i < v[ch].size(); ++i) {
      spec.channels[ch].push_back(parse_term(v[ch][i], fmt::format("{}[{}]", ch_path, i)));
    }
  }
  return spec;
}

SubsystemParams parse_subsystem(const json& v, const std::string& path) {
  SubsystemParams p;
  p.mass = number(v, "m", path);
  p.ixx = number(v, "Ixx", path);
  p.iyy = number(v, "Iyy", path);
  p.izz = number(v, "Izz", path);
  p.arm_length = number(v, "l", path);
  p.gravity = number_or(v, "g", path, 9.81);
  if (v.contains("disturbance")) p.disturbance = parse_disturbance(v.at("disturbance"), join(path, "disturbance"));
  try {
    dynamics::validate(p);
  } catch (const ConfigError& e) {
    throw ConfigError(join(path, e.path()), e.what());
  }
  return p;
}

ModeConfig parse_mode(const json& v, const std::string& path) {
  ModeConfig m;
  m.k1 = matrix_of<4>(require(v, "K1", path), join(path, "K1"));
  m.k2 = matrix_of<4>(require(v, "K2", path), join(path, "K2"));
  m.q = matrix_of<8>(require(v, "Q", path), join(path, "Q"));
  m.d_diag = vector_of<4>(require(v, "D", path), join(path, "D"));
  m.alpha = vector_of<4>(require(v, "alpha", path), join(path, "alpha"));
  m.eps = number(v, "eps", path);
  m.eps_bar = number(v, "eps_bar", path);
  m.initial.theta_hat = vector_of<4>(require(v, "theta0", path), join(path, "theta0"));
  m.initial.zeta = number(v, "zeta0", path);
  m.initial.gamma = number(v, "gamma0", path);
  return m;
}

SinusoidalTrajectory parse_trajectory(const json& v, const std::string& path) {
  const json& type = require(v, "type", path);
  SinusoidalTrajectory traj;
  if (type == "constant") {
    traj.offset = vector_of<4>(require(v, "q", path), join(path, "q"));
  } else if (type == "sinusoidal") {
    traj.offset = vector_of<4>(require(v, "offset", path), join(path, "offset"));
    traj.amplitude = vector_of<4>(require(v, "amplitude", path), join(path, "amplitude"));
    traj.frequency = vector_of<4>(require(v, "frequency", path), join(path, "frequency"));
    if (v.contains("phase")) traj.phase = vector_of<4>(v.at("phase"), join(path, "phase"));
  } else {
    throw ConfigError(join(path, "type"), "unknown trajectory type (expected constant or sinusoidal)");
  }
  validate(traj);
  return traj;
}

dynamics::PlantState parse_initial(const json& v, const std::string& path) {
  dynamics::PlantState s;
  s.q = vector_of<4>(require(v, "q", path), join(path, "q"));
  if (v.contains("q_dot")) s.q_dot = vector_of<4>(v.at("q_dot"), join(path, "q_dot"));
  if (v.contains("q_u")) s.q_u = vector_of<2>(v.at("q_u"), join(path, "q_u"));
  if (v.contains("q_u_dot")) s.q_u_dot = vector_of<2>(v.at("q_u_dot"), join(path, "q_u_dot"));
  return s;
}

switching::SwitchSchedule parse_switching(const json& v, const std::string& path, double t0,
                                          double horizon, std::size_t mode_count) {
  const double vartheta = number(v, "vartheta", path);
  const double n0 = number_or(v, "N0", path, 3.0);
  if (!(vartheta > 0.0)) throw ConfigError(join(path, "vartheta"), "must be > 0");
  if (!(n0 > 0.0)) throw ConfigError(join(path, "N0"), "must be > 0");

  switching::SchedulePattern pattern;
  std::vector<std::size_t> cycle;
  if (v.contains("schedule")) {
    const json& sched = v.at("schedule");
    const std::string sp = join(path, "schedule");
    if (!sched.is_array() || sched.empty()) throw ConfigError(sp, "expected a non-empty array of {t, sigma}");
    switching::ExplicitPattern ex;
    for (std::size_t i = 0; i < sched.size(); ++i) {
      const std::string ep = fmt::format("{}[{}]", sp, i);
      ex.events.push_back({number(sched[i], "t", ep), sigma_of(require(sched[i], "sigma", ep), join(ep, "sigma"))});
    }
    if (ex.events.front().time != t0) throw ConfigError(sp + "[0].t", "first entry must be at sim.t0");
    switching::SwitchSchedule s{ex.events, horizon, vartheta, n0};
    switching::validate(s, mode_count);
    return s;
  }

  const json& pat = require(v, "pattern", path);
  const std::string pp = join(path, "pattern");
  const json& type = require(pat, "type", pp);
  if (type == "periodic") {
    pattern = switching::PeriodicPattern{number(pat, "period", pp)};
  } else if (type == "burst_then_slow") {
    switching::BurstThenSlowPattern b;
    b.burst_start = number(pat, "burst_start", pp);
    const double count = number(pat, "burst_count", pp);
    if (count < 0.0 || count != static_cast<double>(static_cast<long>(count))) {
      throw ConfigError(join(pp, "burst_count"), "must be a non-negative integer");
    }
    b.burst_count = static_cast<std::size_t>(count);
    b.burst_spacing = number_or(pat, "burst_spacing", pp, 0.0);
    b.slow_gap = number(pat, "slow_gap", pp);
    pattern = b;
  } else {
    throw ConfigError(join(pp, "type"), "unknown pattern (expected periodic or burst_then_slow)");
  }
  const json& modes = require(pat, "modes", pp);
  if (!modes.is_array() || modes.empty()) throw ConfigError(join(pp, "modes"), "expected a non-empty array");
  for (std::size_t i = 0; i < modes.size(); ++i) {
    cycle.push_back(sigma_of(modes[i], fmt::format("{}.modes[{}]", pp, i)));
    if (cycle.back() >= mode_count) {
      throw ConfigError(fmt::format("{}.modes[{}]", pp, i), "sigma out of range");
    }
  }
  return switching::generate_schedule(pattern, vartheta, n0, t0, horizon, cycle);
}

// ---------------------------------------------------------------------------------------------
// Writing helpers.

json vector_json(const auto& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v[i]);
  return out;
}

json matrix_json(const auto& m) {
  json out = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) out.push_back(vector_json(m.row(i)));
  return out;
}

json disturbance_json(const DisturbanceSpec& spec) {
  json out = json::array();
  for (const auto& channel : spec.channels) {
    json terms = json::array();
    for (const auto& term : channel) {
      std::visit(
          [&](const auto& t) {
            using T = std::decay_t<decltype(t)>;
            if constexpr (std::is_same_v<T, Sinusoid>) {
              terms.push_back({{"type", "sinusoid"}, {"amplitude", t.amplitude},
                               {"frequency", t.frequency}, {"phase", t.phase}});
            } else {
              terms.push_back({{"type", "pulse"}, {"amplitude", t.amplitude}, {"start", t.start},
                               {"width", t.width}, {"period", t.period}, {"count", t.count}});
            }
          },
          term);
    }
    out.push_back(std::move(terms));
  }
  return out;
}

}  // namespace

sim::Scenario parse_scenario(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError("", fmt::format("malformed document: {}", e.what()));
  }
  if (!doc.is_object()) throw ConfigError("", "top level must be an object");

  const json& version = require(doc, "schema_version", "");
  if (!version.is_number_integer() || version.get<int>() != kSchemaVersion) {
    throw ConfigError("schema_version", fmt::format("unsupported (expected {})", kSchemaVersion));
  }

  sim::Scenario sc;
  const json& subsystems = require(doc, "subsystems", "");
  if (!subsystems.is_array() || subsystems.empty()) throw ConfigError("subsystems", "expected a non-empty array");
  for (std::size_t i = 0; i < subsystems.size(); ++i) {
    sc.subsystems.push_back(parse_subsystem(subsystems[i], fmt::format("subsystems[{}]", i)));
  }

  const json& controller = require(doc, "controller", "");
  if (!controller.is_array() || controller.empty()) throw ConfigError("controller", "expected a non-empty array");
  if (controller.size() != sc.subsystems.size()) {
    throw ConfigError("controller", fmt::format("expected {} entries (one per subsystem), got {}",
                                                sc.subsystems.size(), controller.size()));
  }
  for (std::size_t i = 0; i < controller.size(); ++i) {
    sc.controllers.push_back(parse_mode(controller[i], fmt::format("controller[{}]", i)));
  }

  const json& simv = require(doc, "sim", "");
  const double t0 = number_or(simv, "t0", "sim", 0.0);
  sc.step = number(simv, "h", "sim");
  sc.horizon = number(simv, "T", "sim");
  sc.varpi = number(simv, "varpi", "sim");
  sc.initial = parse_initial(require(simv, "initial", "sim"), "sim.initial");
  if (!(sc.horizon > t0)) throw ConfigError("sim.T", "must exceed sim.t0");

  sc.trajectory = parse_trajectory(require(doc, "trajectory", ""), "trajectory");

  const json& sw = require(doc, "switching", "");
  sc.kappa_fraction = number_or(sw, "kappa_fraction", "switching", 0.9);
  sc.schedule = parse_switching(sw, "switching", t0, sc.horizon, sc.subsystems.size());

  sim::validate(sc);
  return sc;
}

sim::Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("", fmt::format("cannot read config file '{}'", path.string()));
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str());
}

std::string dump_scenario(const sim::Scenario& sc) {
  json doc;
  doc["schema_version"] = kSchemaVersion;

  json subsystems = json::array();
  for (const auto& p : sc.subsystems) {
    subsystems.push_back({{"m", p.mass}, {"Ixx", p.ixx}, {"Iyy", p.iyy}, {"Izz", p.izz},
                          {"l", p.arm_length}, {"g", p.gravity},
                          {"disturbance", disturbance_json(p.disturbance)}});
  }
  doc["subsystems"] = std::move(subsystems);

  json controller = json::array();
  for (const auto& m : sc.controllers) {
    controller.push_back({{"K1", matrix_json(m.k1)}, {"K2", matrix_json(m.k2)},
                          {"Q", matrix_json(m.q)}, {"D", vector_json(m.d_diag)},
                          {"alpha", vector_json(m.alpha)}, {"eps", m.eps}, {"eps_bar", m.eps_bar},
                          {"theta0", vector_json(m.initial.theta_hat)},
                          {"zeta0", m.initial.zeta}, {"gamma0", m.initial.gamma}});
  }
  doc["controller"] = std::move(controller);

  json schedule = json::array();
  for (const auto& ev : sc.schedule.events) schedule.push_back({{"t", ev.time}, {"sigma", ev.mode + 1}});
  doc["switching"] = {{"vartheta", sc.schedule.vartheta}, {"N0", sc.schedule.n0},
                      {"kappa_fraction", sc.kappa_fraction}, {"schedule", std::move(schedule)}};

  doc["trajectory"] = {{"type", "sinusoidal"},
                       {"offset", vector_json(sc.trajectory.offset)},
                       {"amplitude", vector_json(sc.trajectory.amplitude)},
                       {"frequency", vector_json(sc.trajectory.frequency)},
                       {"phase", vector_json(sc.trajectory.phase)}};

  doc["sim"] = {{"t0", sc.schedule.start()}, {"h", sc.step}, {"T", sc.horizon}, {"varpi", sc.varpi},
                {"initial", {{"q", vector_json(sc.initial.q)},
                             {"q_dot", vector_json(sc.initial.q_dot)},
                             {"q_u", vector_json(sc.initial.q_u)},
                             {"q_u_dot", vector_json(sc.initial.q_u_dot)}}}};
  return doc.dump(2) + "\n";
}

sim::Scenario with_horizon(sim::Scenario scenario, double horizon) {
  if (!(horizon > scenario.schedule.start())) {
    throw ConfigError("sim.T", "horizon must exceed the start time");
  }
  auto& ev = scenario.schedule.events;
  ev.erase(std::remove_if(ev.begin() + 1, ev.end(), [&](const auto& e) { return e.time >= horizon; }),
           ev.end());
  scenario.horizon = horizon;
  scenario.schedule.horizon_end = horizon;
  return scenario;
}

}  // namespace switchquad::io
