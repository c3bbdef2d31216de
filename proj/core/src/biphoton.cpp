#include "pairspec/biphoton.hpp"

#include <fmt/format.h>

#include <cmath>
#include <stdexcept>

#include "pairspec/constants.hpp"
#include "pairspec/numerics.hpp"

namespace pairspec {

std::complex<double> pair_amplitude(double dl_ps, double nu_rad_per_ps) {
  if (!(dl_ps > 0.0)) {
    throw std::domain_error(fmt::format("pair_amplitude: DL must be > 0 ps, got {}", dl_ps));
  }
  double half = 0.5 * dl_ps * nu_rad_per_ps;
  return std::polar(sinc(half), -half);
}

void FilterSpec::validate() const {
  if (!(center_nm > 0.0) || !(fwhm_nm > 0.0)) {
    throw std::invalid_argument(
        fmt::format("filter: center ({} nm) and FWHM ({} nm) must be > 0", center_nm, fwhm_nm));
  }
}

double FilterSpec::transmission_at_wavelength(double lambda_um) const {
  double d_nm = lambda_um * 1e3 - center_nm;
  return std::exp(-4.0 * std::log(2.0) * d_nm * d_nm / (fwhm_nm * fwhm_nm));
}

double FilterSpec::transmission_at_detuning(double nu_rad_per_ps, double center_omega) const {
  double omega = center_omega + nu_rad_per_ps;
  if (!(omega > 0.0)) {
    throw std::domain_error(
        fmt::format("filter: absolute frequency {} rad/ps is not positive", omega));
  }
  return transmission_at_wavelength(2.0 * kPi * kSpeedOfLightUmPerPs / omega);
}

double degenerate_center_omega(double pump_wavelength_um) {
  if (!(pump_wavelength_um > 0.0)) {
    throw std::invalid_argument(
        fmt::format("pump wavelength must be > 0 um, got {}", pump_wavelength_um));
  }
  return 2.0 * kPi * kSpeedOfLightUmPerPs / (2.0 * pump_wavelength_um);
}

SpectralGrid default_grid(double dl_ps, double pump_wavelength_um, int n_points,
                          double lobes_each_side) {
  if (!(dl_ps > 0.0)) {
    throw std::invalid_argument(fmt::format("default_grid: DL must be > 0 ps, got {}", dl_ps));
  }
  double nu_max = lobes_each_side * 2.0 * kPi / dl_ps;
  return SpectralGrid(degenerate_center_omega(pump_wavelength_um), nu_max, n_points);
}

SpectralGrid detection_grid(double dl_ps, double pump_wavelength_um, const FilterSpec& filter,
                            int n_points, double lobes_each_side) {
  if (!(dl_ps > 0.0)) {
    throw std::invalid_argument(fmt::format("detection_grid: DL must be > 0 ps, got {}", dl_ps));
  }
  filter.validate();
  const double omega = degenerate_center_omega(pump_wavelength_um);
  const double nu_lobes = lobes_each_side * 2.0 * kPi / dl_ps;
  // Keep the spacing the lobe count alone would produce, but reach far enough
  // into the filter wings that their transform (the short coherence spike of
  // the broadband background) is not distorted by grid truncation.
  const double spacing = 2.0 * nu_lobes / (n_points - 1);
  const double lambda_um = filter.center_nm * 1e-3;
  const double filter_fwhm_nu =
      2.0 * kPi * kSpeedOfLightUmPerPs * filter.fwhm_nm * 1e-3 / (lambda_um * lambda_um);
  double nu_max = std::max(nu_lobes, std::min(2.5 * filter_fwhm_nu, 0.9 * omega));
  int n = static_cast<int>(std::ceil(2.0 * nu_max / spacing)) + 1;
  if (n % 2 == 0) ++n;
  nu_max = 0.5 * spacing * (n - 1);
  return SpectralGrid(omega, nu_max, n);
}

BiphotonState build_state(const SpectralGrid& grid, double dl_ps, double pump_wavelength_um) {
  if (!(dl_ps > 0.0)) {
    throw std::domain_error(fmt::format("build_state: DL must be > 0 ps, got {}", dl_ps));
  }
  BiphotonState state{grid, dl_ps, pump_wavelength_um, {}, 0.0, {}};
  state.amplitude.resize(grid.n_points);
  for (int i = 0; i < grid.n_points; ++i) {
    state.amplitude[i] = pair_amplitude(dl_ps, grid.nu(i));
  }
  // Weight of sinc^2 beyond the grid: 2 * int_X^inf sinc^2(x) dx / pi with
  // X = DL nu_max / 2; the integral is bounded by 2/X (|sin| <= 1 envelope).
  double big_x = 0.5 * dl_ps * grid.nu_max;
  state.tail_mass_estimate = 2.0 / (kPi * big_x);
  if (grid.nu_max < 20.0 * kPi / dl_ps) {
    state.warnings.push_back(fmt::format(
        "truncated-tails: grid covers |nu| <= {:.6g} rad/ps, under 10 sinc^2 lobes per side "
        "(first zero at {:.6g}); ~{:.2g} of the spectral weight is clipped",
        grid.nu_max, 2.0 * kPi / dl_ps, state.tail_mass_estimate));
  }
  return state;
}

SpectralDensity signal_marginal(const BiphotonState& state) {
  std::vector<double> w(state.amplitude.size());
  for (std::size_t i = 0; i < w.size(); ++i) w[i] = std::norm(state.amplitude[i]);
  return SpectralDensity::normalized(state.grid, std::move(w), "signal marginal", state.warnings);
}

SpectralDensity idler_marginal(const BiphotonState& state) {
  SpectralDensity d = signal_marginal(state);
  d.label = "idler marginal";
  return d;
}

SpectralDensity apply_filter(const SpectralDensity& density, const FilterSpec& filter) {
  filter.validate();
  std::vector<double> w(density.weights.size());
  for (std::size_t i = 0; i < w.size(); ++i) {
    w[i] = density.weights[i] *
           filter.transmission_at_detuning(density.grid.nu(static_cast<int>(i)),
                                           density.grid.center_omega);
  }
  return SpectralDensity::normalized(density.grid, std::move(w),
                                     fmt::format("filtered({})", density.label),
                                     density.warnings);
}

}  // namespace pairspec
