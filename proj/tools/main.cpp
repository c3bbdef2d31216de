#include <CLI11.hpp>
#include <fmt/format.h>

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "pairspec/config.hpp"
#include "pairspec/pipeline.hpp"

namespace fs = std::filesystem;

namespace {

struct CommonArgs {
  std::string config_path;
  std::string out_dir = "out";
  std::optional<std::uint64_t> seed;
  bool envelope_only = false;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
  cmd->add_option("--config", args.config_path, "key = value run configuration file")
      ->check(CLI::ExistingFile);
  cmd->add_option("--out", args.out_dir, "output directory (created if missing)");
  auto* seed = cmd->add_option("--seed", "override the configured random seed");
  seed->each([&args](const std::string& v) { args.seed = std::stoull(v); });
  cmd->add_flag("--envelope-only", args.envelope_only,
                "record the fringe envelope instead of the carrier-resolved scan");
}

pairspec::RunConfig make_config(const CommonArgs& args) {
  pairspec::RunConfig cfg =
      args.config_path.empty() ? pairspec::RunConfig{} : pairspec::RunConfig::load(args.config_path);
  if (args.seed) cfg.seed = *args.seed;
  if (args.envelope_only) cfg.michelson.envelope_only = true;
  cfg.validate();
  return cfg;
}

void report_written(const std::vector<fs::path>& files) {
  for (const auto& f : files) std::cout << "wrote " << f.string() << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Michelson pair-spectroscopy simulator and analyzer"};
  app.require_subcommand(1);

  CommonArgs sim_args, ana_args, ent_args, rep_args;
  std::string gram_path, density_path;

  CLI::App* sim = app.add_subcommand(
      "simulate", "produce the detected spectrum and a Michelson interferogram");
  add_common(sim, sim_args);

  CLI::App* ana = app.add_subcommand(
      "analyze", "extract the fringe envelope, fit the notch, recover the spectrum");
  add_common(ana, ana_args);
  ana->add_option("interferogram", gram_path, "interferogram CSV to analyze")
      ->required()
      ->check(CLI::ExistingFile);

  CLI::App* ent = app.add_subcommand(
      "entropy", "purity, entropy ledger and convention sweep of the subsystem state");
  add_common(ent, ent_args);
  ent->add_option("--density", density_path,
                  "external spectral density CSV (nu_rad_per_ps,weight) instead of the model");

  CLI::App* rep =
      app.add_subcommand("report", "run simulate, analyze and entropy, then summarize");
  add_common(rep, rep_args);

  CLI11_PARSE(app, argc, argv);

  try {
    if (sim->parsed()) {
      auto result = pairspec::run_simulate(make_config(sim_args), sim_args.out_dir);
      report_written(result.files);
    } else if (ana->parsed()) {
      auto result = pairspec::run_analyze(make_config(ana_args), gram_path, ana_args.out_dir);
      report_written(result.files);
    } else if (ent->parsed()) {
      std::optional<fs::path> density;
      if (!density_path.empty()) density = density_path;
      auto result = pairspec::run_entropy(make_config(ent_args), density, ent_args.out_dir);
      report_written(result.files);
    } else if (rep->parsed()) {
      auto result = pairspec::run_report(make_config(rep_args), rep_args.out_dir);
      report_written(result.files);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
