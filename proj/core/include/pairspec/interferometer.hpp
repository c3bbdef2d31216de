#pragma once

#include <complex>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "pairspec/biphoton.hpp"
#include "pairspec/spectral_density.hpp"

namespace pairspec {

enum class NoiseModel { none, poisson };
enum class PathConvention {
  optical_path,     // delta_L is the optical path difference; tau = delta_L / c
  arm_difference,   // delta_L is the mirror displacement; tau = 2 delta_L / c
};

std::string to_string(NoiseModel m);
std::string to_string(PathConvention c);
NoiseModel noise_model_from_string(const std::string& s);
PathConvention path_convention_from_string(const std::string& s);

struct MichelsonConfig {
  double scan_min_um = -150.0;
  double scan_max_um = 150.0;
  double step_um = 0.025;
  double background_weight = 0.3;   // broadband fraction leaking past the source
  double rate_scale_cps = 20000.0;  // rate at zero path difference
  double dwell_time_s = 0.1;
  NoiseModel noise = NoiseModel::none;
  std::uint64_t seed = 1;
  PathConvention path_convention = PathConvention::arm_difference;
  bool envelope_only = false;

  void validate() const;
  // Optical path length per unit of the scan axis (1 or 2).
  double path_factor() const {
    return path_convention == PathConvention::optical_path ? 1.0 : 2.0;
  }
  int n_points() const;
  double delta_at(int i) const { return scan_min_um + step_um * i; }
};

struct InterferogramMeta {
  MichelsonConfig config;
  double center_omega = 0.0;  // rad/ps
  std::string label;
  std::string config_hash;
  std::vector<std::string> warnings;
};

// One recorded scan: counts[i] is the expected (noise = none) or sampled
// (noise = poisson) number of detection events in one dwell at delta_um[i].
struct Interferogram {
  std::vector<double> delta_um;
  std::vector<double> counts;
  InterferogramMeta meta;

  void validate() const;  // strictly increasing uniform axis, counts >= 0
  void write_csv(std::ostream& out) const;
  void write_csv(const std::filesystem::path& path) const;
  static Interferogram read_csv(const std::filesystem::path& path);
};

// What the detector behind the filter sees: the filtered pair marginal mixed
// with a broadband background that also passed the same filter, so the
// background contributes the (normalized) filter transmission profile.
SpectralDensity detected_spectrum(const SpectralDensity& filtered_marginal,
                                  const FilterSpec& filter, double background_weight);

// First-order coherence of the spectrum at relative delay tau:
// G(tau) = int S(nu) exp(i nu tau) dnu  (|G| <= 1, G(0) = 1).
std::complex<double> spectral_coherence(const SpectralDensity& spectrum, double tau_ps);

// Michelson rate R = rate_scale/2 * (1 + Re[exp(i omega tau) G(tau)]).
double counting_rate(const SpectralDensity& spectrum, double delta_um,
                     PathConvention convention, double rate_scale_cps = 1.0);

Interferogram simulate_scan(const SpectralDensity& spectrum, const MichelsonConfig& config);

}  // namespace pairspec
