#include "pairspec/dispersion.hpp"

#include <fmt/format.h>

#include <cmath>
#include <stdexcept>

#include "pairspec/constants.hpp"
#include "pairspec/keyvalue.hpp"

namespace pairspec {

namespace {

const SellmeierCoefficients& pick(const CrystalSpec& c, RayKind ray) {
  return ray == RayKind::ordinary ? c.ordinary : c.extraordinary;
}

void check_inside(const CrystalSpec& c, double wl, bool strict) {
  bool ok = strict ? (wl > c.valid_um.lo_um && wl < c.valid_um.hi_um)
                   : (wl >= c.valid_um.lo_um && wl <= c.valid_um.hi_um);
  if (!ok) {
    throw std::domain_error(fmt::format(
        "wavelength {} um outside {} validity range [{}, {}] um{}", wl, c.name, c.valid_um.lo_um,
        c.valid_um.hi_um, strict ? " (interior point required for dispersion)" : ""));
  }
}

double n_squared(const SellmeierCoefficients& s, double wl) {
  double wl2 = wl * wl;
  return s.a + s.b / (wl2 - s.c) - s.d * wl2;
}

}  // namespace

void CrystalSpec::validate() const {
  if (length_mm <= 0.0) throw std::invalid_argument(fmt::format("{}: length must be > 0 mm", name));
  if (!(valid_um.lo_um > 0.0) || !(valid_um.hi_um > valid_um.lo_um)) {
    throw std::invalid_argument(fmt::format("{}: bad validity range", name));
  }
  for (RayKind ray : {RayKind::ordinary, RayKind::extraordinary}) {
    const auto& s = pick(*this, ray);
    // The resonance at lambda^2 = c must not fall inside the validity range.
    if (s.c >= valid_um.lo_um * valid_um.lo_um && s.c <= valid_um.hi_um * valid_um.hi_um) {
      throw std::invalid_argument(fmt::format("{}: Sellmeier pole inside validity range", name));
    }
    double lo2 = n_squared(s, valid_um.lo_um);
    double hi2 = n_squared(s, valid_um.hi_um);
    if (lo2 <= 0.0 || hi2 <= 0.0) {
      throw std::invalid_argument(fmt::format("{}: n^2 <= 0 inside validity range", name));
    }
  }
}

CrystalSpec CrystalSpec::bbo_type2_degenerate() {
  CrystalSpec c;
  c.name = "bbo-type2-degenerate";
  c.length_mm = 3.0;
  c.ordinary = {2.7405, 0.0184, 0.0179, 0.0155};
  // Effective extraordinary set: least-squares fit of the same functional
  // form to [cos^2(th)/n_o^2 + sin^2(th)/n_e^2]^{-1/2} at th = 48.904 deg
  // (the collinear degenerate phase-matching angle for a 351.1 nm pump)
  // over 0.45-1.00 um; max index error of the fit is 6e-8.
  c.extraordinary = {2.5189655529, 0.0149046032, 0.0165880318, 0.0084913950};
  c.valid_um = {0.45, 1.00};
  return c;
}

CrystalSpec CrystalSpec::load(const std::filesystem::path& path) {
  KeyValueFile kv = KeyValueFile::parse_file(path);
  CrystalSpec c;
  c.name = kv.get_string("name");
  c.length_mm = kv.get_double("length_mm");
  c.ordinary = {kv.get_double("sellmeier_o.A"), kv.get_double("sellmeier_o.B"),
                kv.get_double("sellmeier_o.C"), kv.get_double("sellmeier_o.D")};
  c.extraordinary = {kv.get_double("sellmeier_e.A"), kv.get_double("sellmeier_e.B"),
                     kv.get_double("sellmeier_e.C"), kv.get_double("sellmeier_e.D")};
  c.valid_um = {kv.get_double("valid_lo_um"), kv.get_double("valid_hi_um")};
  if (kv.has("override_mismatch_ps_per_mm")) {
    c.override_mismatch_ps_per_mm = kv.get_double("override_mismatch_ps_per_mm");
  }
  kv.reject_unknown();
  c.validate();
  return c;
}

double refractive_index(const CrystalSpec& crystal, RayKind ray, double wavelength_um) {
  check_inside(crystal, wavelength_um, /*strict=*/false);
  double n2 = n_squared(pick(crystal, ray), wavelength_um);
  if (n2 <= 0.0) {
    throw std::domain_error(fmt::format("{}: n^2 <= 0 at {} um", crystal.name, wavelength_um));
  }
  return std::sqrt(n2);
}

double index_slope(const CrystalSpec& crystal, RayKind ray, double wavelength_um) {
  check_inside(crystal, wavelength_um, /*strict=*/true);
  const auto& s = pick(crystal, ray);
  double wl = wavelength_um;
  double wl2 = wl * wl;
  double denom = wl2 - s.c;
  // d(n^2)/dlambda = -2 lambda b / (lambda^2 - c)^2 - 2 d lambda,
  // dn/dlambda = d(n^2)/dlambda / (2 n).
  double dn2 = -2.0 * wl * s.b / (denom * denom) - 2.0 * s.d * wl;
  return dn2 / (2.0 * refractive_index(crystal, ray, wl));
}

double inverse_group_velocity(const CrystalSpec& crystal, RayKind ray, double wavelength_um) {
  double n = refractive_index(crystal, ray, wavelength_um);
  double slope = index_slope(crystal, ray, wavelength_um);
  return (n - wavelength_um * slope) / kSpeedOfLightMmPerPs;
}

double sellmeier_mismatch(const CrystalSpec& crystal, double wavelength_um) {
  return inverse_group_velocity(crystal, RayKind::ordinary, wavelength_um) -
         inverse_group_velocity(crystal, RayKind::extraordinary, wavelength_um);
}

double group_velocity_mismatch(const CrystalSpec& crystal, double wavelength_um) {
  if (crystal.override_mismatch_ps_per_mm) return *crystal.override_mismatch_ps_per_mm;
  return sellmeier_mismatch(crystal, wavelength_um);
}

double group_delay_spread(const CrystalSpec& crystal, double wavelength_um) {
  return group_velocity_mismatch(crystal, wavelength_um) * crystal.length_mm;
}

}  // namespace pairspec
