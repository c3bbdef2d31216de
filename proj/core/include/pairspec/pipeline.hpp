#pragma once

#include <filesystem>
#include <optional>
#include <vector>

#include "pairspec/config.hpp"
#include "pairspec/quantum_info.hpp"
#include "pairspec/spectroscopy.hpp"

namespace pairspec {

// End-to-end drivers behind the CLI subcommands.  Each writes its artifacts
// into out_dir (created if needed) and returns what it wrote plus the
// headline numbers; any failure throws, leaving no claim of success.

struct SimulateResult {
  std::vector<std::filesystem::path> files;
  std::filesystem::path interferogram_path;
  double dl_used_ps = 0.0;
  std::string dl_source;
  std::optional<double> dl_sellmeier_ps;
  double center_omega = 0.0;
};

struct AnalyzeResult {
  std::vector<std::filesystem::path> files;
  EnvelopeFit fit;
  BandwidthEstimate bandwidth;
  bool bandwidth_agrees = false;  // within 20% of the configured reference
  std::optional<double> spike_fwhm_expected_um;
  bool recovered = false;
};

struct EntropyResult {
  std::vector<std::filesystem::path> files;
  double purity_value = 0.0;
  EntropyReport ledger;
  EntropySweep sweep;
};

struct ReportResult {
  std::vector<std::filesystem::path> files;
};

SimulateResult run_simulate(const RunConfig& cfg, const std::filesystem::path& out_dir);
AnalyzeResult run_analyze(const RunConfig& cfg, const std::filesystem::path& interferogram_csv,
                          const std::filesystem::path& out_dir);
EntropyResult run_entropy(const RunConfig& cfg,
                          const std::optional<std::filesystem::path>& density_csv,
                          const std::filesystem::path& out_dir);
ReportResult run_report(const RunConfig& cfg, const std::filesystem::path& out_dir);

}  // namespace pairspec
