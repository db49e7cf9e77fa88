#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "commands.hpp"
#include "switchquad/scenario_io.hpp"
#include "switchquad/presets.hpp"

using namespace switchquad;
namespace fs = std::filesystem;

namespace {

struct Output {
  int code;
  std::string out;
  std::string err;
};

template <typename Cmd>
Output call(Cmd cmd, const cli::Options& opts) {
  std::ostringstream out, err;
  const int code = cmd(opts, out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("switchquad_cli_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

fs::path write_config(const fs::path& dir, const nlohmann::json& doc) {
  const fs::path p = dir / "scenario.json";
  std::ofstream(p) << doc.dump(2);
  return p;
}

nlohmann::json preset_doc() { return nlohmann::json::parse(io::dump_scenario(presets::paper_s5())); }

}  // namespace

TEST(Cli, AdtPrintsThresholdForPreset) {
  cli::Options o;
  o.preset = "paper_s5";
  const Output r = call(cli::cmd_adt, o);
  EXPECT_EQ(r.code, cli::kOk);
  EXPECT_NE(r.out.find("vartheta_star 6.75969\n"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("mode 3 lambda_min(P)"), std::string::npos);
}

TEST(Cli, AdtSingleAndIdenticalModes) {
  const fs::path dir = scratch("adt");
  auto doc = preset_doc();
  doc["subsystems"] = {doc["subsystems"][0]};
  doc["controller"] = {doc["controller"][0]};
  doc["switching"]["schedule"] = {{{"t", 0.0}, {"sigma", 1}}};
  cli::Options o;
  o.config = write_config(dir, doc);
  Output r = call(cli::cmd_adt, o);
  EXPECT_EQ(r.code, cli::kOk) << r.err;
  EXPECT_NE(r.out.find("vartheta_star 0\n"), std::string::npos) << r.out;

  doc = preset_doc();
  doc["controller"][1] = doc["controller"][0];
  doc["controller"][2] = doc["controller"][0];
  o.config = write_config(dir, doc);
  r = call(cli::cmd_adt, o);
  EXPECT_NE(r.out.find("mu 1\n"), std::string::npos) << r.out;
}

TEST(Cli, SynthesisFailureExitsFour) {
  const fs::path dir = scratch("synth");
  auto doc = preset_doc();
  doc["controller"][0]["K1"] = -1.0;
  cli::Options o;
  o.config = write_config(dir, doc);
  const Output r = call(cli::cmd_adt, o);
  EXPECT_EQ(r.code, cli::kSimulation);
  EXPECT_EQ(r.err.rfind("error=synthesis ", 0), 0u) << r.err;
}

TEST(Cli, MissingControllerExitsTwoWithPath) {
  const fs::path dir = scratch("schema");
  auto doc = preset_doc();
  doc.erase("controller");
  cli::Options o;
  o.config = write_config(dir, doc);
  o.out = dir / "out";
  const Output r = call(cli::cmd_run, o);
  EXPECT_EQ(r.code, cli::kSchema);
  EXPECT_EQ(r.err, "error=schema path=controller message=\"missing required field\"\n");
  EXPECT_FALSE(fs::exists(o.out / "trace.csv"));
}

TEST(Cli, BurstBeyondChatterBoundExitsThree) {
  const fs::path dir = scratch("burst");
  auto doc = preset_doc();
  doc["switching"]["schedule"] = {{{"t", 0.0}, {"sigma", 1}}, {{"t", 1.0}, {"sigma", 2}},
                                  {{"t", 1.1}, {"sigma", 3}}, {{"t", 1.2}, {"sigma", 1}},
                                  {{"t", 1.3}, {"sigma", 2}}};
  cli::Options o;
  o.config = write_config(dir, doc);
  o.out = dir / "out";
  Output r = call(cli::cmd_run, o);
  EXPECT_EQ(r.code, cli::kAdt);
  EXPECT_NE(r.err.find("window [1, 1.3]"), std::string::npos) << r.err;

  r = call(cli::cmd_certify, o);
  EXPECT_EQ(r.code, cli::kAdt);
  EXPECT_NE(r.out.find("certified: no"), std::string::npos);
  EXPECT_NE(r.out.find("t1 1 t2 1.3 count 4"), std::string::npos) << r.out;
}

TEST(Cli, DwellBelowThresholdExitsThree) {
  const fs::path dir = scratch("dwell");
  auto doc = preset_doc();
  doc["switching"]["vartheta"] = 5.0;
  cli::Options o;
  o.config = write_config(dir, doc);
  o.out = dir / "out";
  const Output r = call(cli::cmd_run, o);
  EXPECT_EQ(r.code, cli::kAdt);
  EXPECT_NE(r.err.find("vartheta*"), std::string::npos);
}

TEST(Cli, CertifyPresetAndEmptySchedule) {
  cli::Options o;
  o.preset = "paper_s5";
  EXPECT_EQ(call(cli::cmd_certify, o).code, cli::kOk);

  const fs::path dir = scratch("empty");
  auto doc = preset_doc();
  doc["switching"]["schedule"] = {{{"t", 0.0}, {"sigma", 2}}};
  cli::Options e;
  e.config = write_config(dir, doc);
  const Output r = call(cli::cmd_certify, e);
  EXPECT_EQ(r.code, cli::kOk);
  EXPECT_NE(r.out.find("certified: yes (0 switches"), std::string::npos);
}

TEST(Cli, RunWritesTraceSummaryAndPlots) {
  const fs::path dir = scratch("run");
  cli::Options o;
  o.preset = "paper_s5";
  o.horizon = 3.0;
  o.out = dir;
  const Output r = call(cli::cmd_run, o);
  ASSERT_EQ(r.code, cli::kOk) << r.err;
  EXPECT_NE(r.out.find("ADT certified: yes"), std::string::npos);
  EXPECT_NE(r.out.find("vartheta*: 6.75969 s"), std::string::npos);
  for (const char* f : {"trace.csv", "summary.txt", "plots/errors.csv", "plots/gains_mode1.csv",
                        "plots/gains_mode3.csv", "plots/switching.csv", "plots/disturbance.csv"}) {
    EXPECT_TRUE(fs::exists(dir / f)) << f;
  }
  std::ifstream summary(dir / "summary.txt");
  std::stringstream s;
  s << summary.rdbuf();
  EXPECT_EQ(s.str(), r.out);
}

TEST(Cli, OutputsArePureFunctionsOfTheConfig) {
  cli::Options o;
  o.preset = "paper_s5";
  o.horizon = 1.0;
  o.out = scratch("pure_a");
  const Output a = call(cli::cmd_run, o);
  o.out = scratch("pure_b");
  o.seed = 1234;
  const Output b = call(cli::cmd_run, o);
  EXPECT_EQ(a.out, b.out);
  auto slurp = [](const fs::path& p) {
    std::ifstream in(p);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
  };
  EXPECT_EQ(slurp(scratch("x").parent_path() / "switchquad_cli_pure_a/trace.csv"),
            slurp(o.out / "trace.csv"));
}

TEST(Cli, PresetDumpReloadsIdentically) {
  cli::Options o;
  o.preset = "paper_s5";
  const Output r = call(cli::cmd_preset, o);
  ASSERT_EQ(r.code, cli::kOk);
  const fs::path dir = scratch("preset");
  std::ofstream(dir / "p.json") << r.out;
  cli::Options reload;
  reload.config = dir / "p.json";
  EXPECT_EQ(call(cli::cmd_preset, reload).out, r.out);
}

TEST(Cli, StepOverrideMustDivideHorizon) {
  cli::Options o;
  o.preset = "paper_s5";
  o.step = 0.0003;
  o.horizon = 1.0;
  const Output r = call(cli::cmd_adt, o);
  EXPECT_EQ(r.code, cli::kSchema);
  EXPECT_NE(r.err.find("path=sim.T"), std::string::npos);
}

TEST(Cli, UnknownPresetAndMissingSource) {
  cli::Options o;
  o.preset = "nope";
  EXPECT_EQ(call(cli::cmd_adt, o).code, cli::kSchema);
  EXPECT_EQ(call(cli::cmd_adt, cli::Options{}).code, cli::kSchema);
}
