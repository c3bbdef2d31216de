#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "pairspec/config.hpp"
#include "pairspec/pipeline.hpp"

using namespace pairspec;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir(const char* leaf) {
  auto dir = fs::temp_directory_path() / "pairspec_tests" / leaf;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

fs::path write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path);
  out << text;
  return path;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

// A configuration small enough for fast end-to-end runs.
RunConfig small_config() {
  RunConfig cfg;
  cfg.grid_n_points = 801;
  cfg.michelson.scan_min_um = -30.0;
  cfg.michelson.scan_max_um = 30.0;
  return cfg;
}

}  // namespace

TEST_CASE("defaults validate and describe the reference setup") {
  RunConfig cfg;
  CHECK_NOTHROW(cfg.validate());
  CHECK(cfg.hash().size() == 16);
  REQUIRE(cfg.override_dl_ps.has_value());
  CHECK(*cfg.override_dl_ps == 0.7506);

  auto crystal = cfg.resolve_crystal();
  CHECK(crystal.name == "bbo-type2-degenerate");
  CHECK(cfg.resolved_dl_ps(crystal) == 0.7506);
  CHECK(cfg.dl_source(crystal).find("override") != std::string::npos);
  CHECK(cfg.degenerate_wavelength_um() == doctest::Approx(0.7022).epsilon(1e-15));
}

TEST_CASE("echo output reloads to an identical configuration") {
  auto dir = scratch_dir("echo");
  RunConfig cfg;
  cfg.seed = 99;
  cfg.entropy_x_spans = {50.0, 500.0};
  cfg.michelson.noise = NoiseModel::poisson;

  auto path = write_text(dir / "config.txt", cfg.echo_string());
  auto back = RunConfig::load(path);
  CHECK(back.echo_string() == cfg.echo_string());
  CHECK(back.hash() == cfg.hash());
}

TEST_CASE("partial configs inherit defaults; unknown keys are fatal") {
  auto dir = scratch_dir("partial");

  auto partial = RunConfig::load(write_text(dir / "partial.txt", "seed = 9\n"));
  CHECK(partial.seed == 9);
  CHECK(partial.grid_n_points == 4001);
  CHECK(partial.filter.fwhm_nm == 83.0);

  auto bad = write_text(dir / "bad.txt", "seed = 9\nscan.stepp_um = 0.1\n");
  CHECK_THROWS_WITH_AS(RunConfig::load(bad), doctest::Contains("scan.stepp_um"),
                       std::runtime_error);

  // Diagnostics carry the line number of the offending entry.
  auto dup = write_text(dir / "dup.txt", "seed = 1\npump.wavelength_um = 0.3\nseed = 2\n");
  CHECK_THROWS_WITH_AS(RunConfig::load(dup), doctest::Contains(":3"), std::runtime_error);

  auto badval = write_text(dir / "badval.txt", "scan.noise = heavy\n");
  CHECK_THROWS_AS(RunConfig::load(badval), std::invalid_argument);
}

TEST_CASE("the none sentinel clears the DL override") {
  auto dir = scratch_dir("sentinel");
  auto cfg = RunConfig::load(write_text(dir / "c.txt", "crystal.override_dl_ps = none\n"));
  CHECK(!cfg.override_dl_ps.has_value());
  auto crystal = cfg.resolve_crystal();
  CHECK(cfg.resolved_dl_ps(crystal) == doctest::Approx(0.750370625944).epsilon(1e-9));
  CHECK(cfg.dl_source(crystal).find("Sellmeier") != std::string::npos);

  // Mismatch override sits between the DL override and the crystal model.
  RunConfig mid;
  mid.override_dl_ps.reset();
  mid.override_mismatch_ps_per_mm = 0.26;
  auto c2 = mid.resolve_crystal();
  CHECK(mid.resolved_dl_ps(c2) == doctest::Approx(0.26 * 3.0).epsilon(1e-12));
}

TEST_CASE("config hash tracks every effective setting") {
  RunConfig a, b;
  CHECK(a.hash() == b.hash());
  b.seed = 2;
  CHECK(a.hash() != b.hash());
  b = a;
  b.filter.fwhm_nm = 82.0;
  CHECK(a.hash() != b.hash());
}

TEST_CASE("simulate artifacts are byte-identical for a fixed seed") {
  auto cfg = small_config();
  cfg.michelson.noise = NoiseModel::poisson;
  cfg.seed = 3;

  auto dir_a = scratch_dir("det_a");
  auto dir_b = scratch_dir("det_b");
  auto ra = run_simulate(cfg, dir_a);
  auto rb = run_simulate(cfg, dir_b);
  CHECK(slurp(ra.interferogram_path) == slurp(rb.interferogram_path));
  CHECK(slurp(dir_a / "run_meta") == slurp(dir_b / "run_meta"));

  auto dir_c = scratch_dir("det_c");
  auto cfg2 = cfg;
  cfg2.seed = 4;
  auto rc = run_simulate(cfg2, dir_c);
  CHECK(slurp(ra.interferogram_path) != slurp(rc.interferogram_path));
}

TEST_CASE("simulate reports both spreads and their discrepancy") {
  auto cfg = small_config();
  auto dir = scratch_dir("meta");
  auto res = run_simulate(cfg, dir);

  CHECK(res.dl_used_ps == 0.7506);
  REQUIRE(res.dl_sellmeier_ps.has_value());
  CHECK(*res.dl_sellmeier_ps == doctest::Approx(0.750370625944).epsilon(1e-9));

  auto meta = slurp(dir / "run_meta");
  CHECK(meta.find("dl_used_ps = 0.7506") != std::string::npos);
  CHECK(meta.find("dl_sellmeier_ps = ") != std::string::npos);
  CHECK(meta.find("dl_sellmeier_rel_deviation = ") != std::string::npos);
  CHECK(meta.find("config_hash = " + cfg.hash()) != std::string::npos);
}

TEST_CASE("analyze on an envelope-only scan skips recovery") {
  auto cfg = small_config();
  cfg.michelson.envelope_only = true;
  cfg.michelson.step_um = 0.5;
  auto dir = scratch_dir("envonly");
  auto sim = run_simulate(cfg, dir);
  auto ana = run_analyze(cfg, sim.interferogram_path, dir);
  CHECK(!ana.recovered);
  CHECK(fs::exists(dir / "envelope.csv"));
  CHECK(!fs::exists(dir / "spectrum_recovered.csv"));
}

TEST_CASE("full report produces the complete artifact set") {
  auto cfg = small_config();
  auto dir = scratch_dir("report");
  auto rep = run_report(cfg, dir);
  CHECK(!rep.files.empty());
  for (const char* name :
       {"run_meta", "marginal.csv", "detected_spectrum.csv", "interferogram.csv",
        "envelope.csv", "spectrum_recovered.csv", "fit_report", "entropy_sweep.csv",
        "entropy_ledger.csv", "entropy_report.txt", "summary.txt"}) {
    CHECK_MESSAGE(fs::exists(dir / name), name);
  }
  auto summary = slurp(dir / "summary.txt");
  CHECK(summary.find(cfg.hash()) != std::string::npos);
}

TEST_CASE("entropy on an external density") {
  auto dir = scratch_dir("external");
  // Uniform five-bin density: purity 1/5, entropy ln 5.
  auto density = write_text(dir / "density.csv",
                            "# label: uniform\n"
                            "# center_omega_rad_per_ps = 2682.5\n"
                            "nu_rad_per_ps,weight\n"
                            "-2,1\n-1,1\n0,1\n1,1\n2,1\n");
  RunConfig cfg;
  auto res = run_entropy(cfg, density, dir);

  CHECK(res.purity_value == doctest::Approx(0.2).epsilon(1e-12));
  CHECK(res.ledger.s_subsystem == doctest::Approx(std::log(5.0)).epsilon(1e-12));
  CHECK(res.ledger.provenance.find("external") != std::string::npos);
  CHECK(fs::exists(dir / "entropy_report.txt"));
  CHECK(fs::exists(dir / "entropy_sweep.csv"));

  auto report = slurp(dir / "entropy_report.txt");
  CHECK(report.find("s_signal_given_idler") != std::string::npos);
}

TEST_CASE("model entropy run flags the matching convention") {
  RunConfig cfg;  // default 4001-point grid
  auto dir = scratch_dir("entropy_model");
  auto res = run_entropy(cfg, std::nullopt, dir);

  CHECK(res.purity_value == doctest::Approx(6.734718993301955e-3).epsilon(1e-9));
  CHECK(res.ledger.s_subsystem == doctest::Approx(5.395653927289949).epsilon(1e-9));
  CHECK(res.ledger.provenance == "grid_n=4001");

  int flagged = 0;
  for (const auto& row : res.sweep.rows) flagged += row.flagged ? 1 : 0;
  CHECK(flagged == 1);
  auto report = slurp(dir / "entropy_report.txt");
  CHECK(report.find("closest_match = discrete_bins/detuning_nu/ln grid_n=8001") !=
        std::string::npos);
}
