#include <gtest/gtest.h>

#include <json.hpp>

#include "fixtures.hpp"
#include "switchquad/error.hpp"
#include "switchquad/scenario_io.hpp"
#include "switchquad/trace_io.hpp"

using namespace switchquad;
using nlohmann::json;

namespace {

bool same_scenario(const sim::Scenario& a, const sim::Scenario& b) {
  if (a.subsystems.size() != b.subsystems.size()) return false;
  for (std::size_t i = 0; i < a.subsystems.size(); ++i) {
    const auto& x = a.subsystems[i];
    const auto& y = b.subsystems[i];
    if (x.mass != y.mass || x.ixx != y.ixx || x.iyy != y.iyy || x.izz != y.izz ||
        x.arm_length != y.arm_length || x.gravity != y.gravity)
      return false;
    for (double t = 0.0; t < 100.0; t += 0.25) {
      if (x.disturbance.evaluate(t) != y.disturbance.evaluate(t)) return false;
    }
  }
  return a.controllers == b.controllers && a.varpi == b.varpi && a.schedule == b.schedule &&
         a.kappa_fraction == b.kappa_fraction && a.trajectory == b.trajectory &&
         a.initial.q == b.initial.q && a.initial.q_dot == b.initial.q_dot &&
         a.initial.q_u == b.initial.q_u && a.initial.q_u_dot == b.initial.q_u_dot &&
         a.step == b.step && a.horizon == b.horizon;
}

json preset_doc() { return json::parse(io::dump_scenario(presets::paper_s5())); }

std::string expect_config_error(const json& doc) {
  try {
    io::parse_scenario(doc.dump());
  } catch (const ConfigError& e) {
    return e.path();
  }
  ADD_FAILURE() << "document was accepted";
  return {};
}

}  // namespace

TEST(ScenarioIo, RoundTripIsExact) {
  const sim::Scenario a = presets::paper_s5();
  const sim::Scenario b = io::parse_scenario(io::dump_scenario(a));
  EXPECT_TRUE(same_scenario(a, b));
  EXPECT_EQ(io::dump_scenario(b), io::dump_scenario(a));
}

TEST(ScenarioIo, MissingSectionsNameTheirPath) {
  json doc = preset_doc();
  doc.erase("controller");
  EXPECT_EQ(expect_config_error(doc), "controller");

  doc = preset_doc();
  doc["controller"][1].erase("K2");
  EXPECT_EQ(expect_config_error(doc), "controller[1].K2");

  doc = preset_doc();
  doc["subsystems"][2]["Ixx"] = "heavy";
  EXPECT_EQ(expect_config_error(doc), "subsystems[2].Ixx");

  doc = preset_doc();
  doc["subsystems"][0]["m"] = -1.0;
  EXPECT_EQ(expect_config_error(doc), "subsystems[0].m");

  doc = preset_doc();
  doc["schema_version"] = 99;
  EXPECT_EQ(expect_config_error(doc), "schema_version");

  doc = preset_doc();
  doc["switching"]["schedule"][2]["sigma"] = 7;
  EXPECT_EQ(expect_config_error(doc), "switching.schedule[2]");


  doc = preset_doc();
  doc["subsystems"][0]["disturbance"][3][0]["type"] = "gust";
  EXPECT_EQ(expect_config_error(doc), "subsystems[0].disturbance[3][0].type");

  EXPECT_EQ(expect_config_error(json::array()), "");
  EXPECT_THROW(io::parse_scenario("{not json"), ConfigError);
}

TEST(ScenarioIo, DesignConditionsSurfaceAtSynthesis) {
  json doc = preset_doc();
  doc["controller"][0]["alpha"] = 0.1;  // below varrho / 2
  const sim::Scenario sc = io::parse_scenario(doc.dump());
  try {
    sim::synthesize_modes(sc);
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.path(), "controller[0].alpha[0]");
  }
}

TEST(ScenarioIo, ShorthandMatrixForms) {
  json doc = preset_doc();
  doc["controller"][0]["K1"] = 120.0;
  doc["controller"][0]["D"] = json::array({2.0, 1e-4, 1e-4, 1e-4});
  doc["controller"][0]["Q"] = 2.0;
  doc["controller"][0]["alpha"] = 0.6;
  const sim::Scenario sc = io::parse_scenario(doc.dump());
  EXPECT_EQ(sc.controllers[0], presets::paper_s5().controllers[0]);
}

TEST(ScenarioIo, GeneratedPatternsAreCertified) {
  json doc = preset_doc();
  doc["switching"].erase("schedule");
  doc["switching"]["pattern"] = {{"type", "burst_then_slow"}, {"burst_start", 2.0},
                                 {"burst_count", 3},          {"burst_spacing", 1.5},
                                 {"slow_gap", 7.0},           {"modes", {1, 2, 3}}};
  const sim::Scenario sc = io::parse_scenario(doc.dump());
  EXPECT_EQ(sc.schedule.events[1].time, 2.0);
  EXPECT_EQ(sc.schedule.events[2].mode, 2u);
  EXPECT_EQ(sc.schedule.events[3].mode, 0u);

  doc["switching"]["pattern"] = {{"type", "periodic"}, {"period", 1.0}, {"modes", {1, 2}}};
  EXPECT_THROW(io::parse_scenario(doc.dump()), AdtViolation);
}

TEST(ScenarioIo, HorizonOverrideDropsLateSwitches) {
  const sim::Scenario sc = io::with_horizon(presets::paper_s5(), 4.0);
  EXPECT_EQ(sc.horizon, 4.0);
  EXPECT_EQ(sc.schedule.switch_count(), 2u);
  EXPECT_NO_THROW(sim::validate(sc));
  EXPECT_THROW(io::with_horizon(sc, 0.0), ConfigError);
}

TEST(TraceIo, HeaderAndRowShape) {
  const std::string h = io::trace_header(3);
  EXPECT_EQ(h.rfind("t,z,phi,theta,psi,x,y,e_z,e_phi_deg,e_theta_deg,e_psi_deg,r0,r1,r2,r3,tau0", 0), 0u);
  EXPECT_NE(h.find(",rho,sigma,thetahat10,thetahat11"), std::string::npos);
  EXPECT_NE(h.find(",zeta1,zeta2,zeta3,gamma1,gamma2,gamma3,Vquad"), std::string::npos);

  const sim::SimTrace tr = sim::simulate(fixtures::short_s5(0.01));
  std::ostringstream out;
  io::write_trace_csv(out, tr);
  std::istringstream in(out.str());
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, h);
  const auto columns = std::count(h.begin(), h.end(), ',');
  int rows = 0;
  while (std::getline(in, line)) {
    EXPECT_EQ(std::count(line.begin(), line.end(), ','), columns);
    ++rows;
  }
  EXPECT_EQ(rows, 11);
}
