#include <iostream>

#include <CLI11.hpp>

#include "commands.hpp"

int main(int argc, char** argv) {
  using namespace switchquad;

  CLI::App app{"Switched adaptive quadrotor controller: simulation and dwell-time tools"};
  app.require_subcommand(1);

  cli::Options opts;
  std::string config;
  std::string preset;
  double step = 0.0;
  double horizon = 0.0;
  long long seed = 0;

  auto add_common = [&](CLI::App* sub) {
    auto* c = sub->add_option("--config", config, "Scenario file (JSON)");
    auto* p = sub->add_option("--preset", preset, "Bundled scenario")
                  ->check(CLI::IsMember(std::vector<std::string>{"paper_s5"}));
    c->excludes(p);
    sub->add_option("--step", step, "Override the integration step (s)")->check(CLI::PositiveNumber);
    sub->add_option("--horizon", horizon, "Override the end time (s)")->check(CLI::PositiveNumber);
    sub->add_option("--seed", seed, "Reserved; all models are deterministic");
  };

  auto* run = app.add_subcommand("run", "Simulate and write trace, plot data and summary");
  add_common(run);
  run->add_option("--out", opts.out, "Output directory")->capture_default_str();
  auto* adt = app.add_subcommand("adt", "Print the average-dwell-time threshold");
  add_common(adt);
  auto* certify = app.add_subcommand("certify", "Check the schedule against its ADT constraint");
  add_common(certify);
  auto* preset_cmd = app.add_subcommand("preset", "Print a bundled scenario as a config file");
  add_common(preset_cmd);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : cli::kUsage;
  }

  auto given = [](CLI::App* sub, const char* name) { return sub->count(name) > 0; };
  CLI::App* active = app.get_subcommands().front();
  if (given(active, "--config")) opts.config = config;
  if (given(active, "--preset")) opts.preset = preset;
  if (given(active, "--step")) opts.step = step;
  if (given(active, "--horizon")) opts.horizon = horizon;
  if (given(active, "--seed")) opts.seed = seed;

  if (active == run) return cli::cmd_run(opts, std::cout, std::cerr);
  if (active == adt) return cli::cmd_adt(opts, std::cout, std::cerr);
  if (active == certify) return cli::cmd_certify(opts, std::cout, std::cerr);
  return cli::cmd_preset(opts, std::cout, std::cerr);
}
