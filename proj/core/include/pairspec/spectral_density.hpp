#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "pairspec/grid.hpp"

namespace pairspec {

// Nonnegative spectral weight on a SpectralGrid, normalized so the trapezoid
// integral over nu equals one.  `masses()` gives the discrete per-bin
// probabilities (plain renormalized weights), which is the convention used
// for bin-resolved purity and entropy.
struct SpectralDensity {
  SpectralGrid grid;
  std::vector<double> weights;
  std::string label;
  std::vector<std::string> warnings;

  // Normalizes raw weights (and validates nonnegativity / nonzero mass).
  static SpectralDensity normalized(SpectralGrid grid, std::vector<double> raw_weights,
                                    std::string label, std::vector<std::string> warnings = {});

  double integral() const;               // trapezoid; == 1 within 1e-9 by construction
  std::vector<double> masses() const;    // sums to 1 exactly up to rounding
  double weight_at_zero() const { return weights[grid.center_index()]; }

  void write_csv(std::ostream& out) const;
  void write_csv(const std::filesystem::path& path) const;
};

// CSV form: '# label: <text>', '# center_omega_rad_per_ps = <v>' (optional),
// then 'nu_rad_per_ps,weight' rows.  Reading is tolerant of axes that do not
// satisfy the SpectralGrid invariants (external densities may be arbitrary
// histograms); to_density() enforces them.
struct DensitySamples {
  std::vector<double> nu;
  std::vector<double> weight;
  std::string label;
  std::optional<double> center_omega;

  static DensitySamples read_csv(const std::filesystem::path& path);
  // Requires a uniform symmetric odd-length axis and a center frequency.
  SpectralDensity to_density(std::optional<double> fallback_center_omega = std::nullopt) const;
};

}  // namespace pairspec
