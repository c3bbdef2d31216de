#pragma once

#include <filesystem>
#include <optional>
#include <string>

namespace pairspec {

// n^2(lambda) = a + b / (lambda^2 - c) - d * lambda^2, lambda in micrometers.
struct SellmeierCoefficients {
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;
  double d = 0.0;
};

enum class RayKind { ordinary, extraordinary };

struct WavelengthRange {
  double lo_um = 0.0;
  double hi_um = 0.0;
};

struct CrystalSpec {
  std::string name;
  double length_mm = 0.0;
  SellmeierCoefficients ordinary;
  // For a uniaxial crystal cut for collinear type-II phase matching this is
  // an effective set: it reproduces the angle-tuned extraordinary index
  // n_e(theta, lambda) of the propagating ray, not the principal index.
  SellmeierCoefficients extraordinary;
  WavelengthRange valid_um;
  // When set, group_velocity_mismatch() returns this instead of the
  // Sellmeier-derived value (the Sellmeier value stays available for
  // comparison via sellmeier_mismatch()).
  std::optional<double> override_mismatch_ps_per_mm;

  void validate() const;

  // beta-BaB2O4 cut at 48.90 deg for collinear degenerate type-II conversion
  // of a 351.1 nm pump (signal/idler at 702.2 nm).
  static CrystalSpec bbo_type2_degenerate();

  // key = value file; see README for the schema.
  static CrystalSpec load(const std::filesystem::path& path);
};

// Index, slope dn/dlambda [1/um], and inverse group velocity
// 1/u = (n - lambda dn/dlambda) / c [ps/mm].  Index evaluation allows the
// closed validity range; the derivative-based quantities need an interior
// point and reject boundary wavelengths.
double refractive_index(const CrystalSpec& crystal, RayKind ray, double wavelength_um);
double index_slope(const CrystalSpec& crystal, RayKind ray, double wavelength_um);
double inverse_group_velocity(const CrystalSpec& crystal, RayKind ray, double wavelength_um);

// D = 1/u_o - 1/u_e [ps/mm], always from the Sellmeier sets.
double sellmeier_mismatch(const CrystalSpec& crystal, double wavelength_um);
// Same, but honouring override_mismatch_ps_per_mm when present.
double group_velocity_mismatch(const CrystalSpec& crystal, double wavelength_um);
// DL = D * length [ps]; the single timescale of the pair state.
double group_delay_spread(const CrystalSpec& crystal, double wavelength_um);

}  // namespace pairspec
