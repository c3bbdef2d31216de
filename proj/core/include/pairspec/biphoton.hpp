#pragma once

#include <complex>
#include <string>
#include <vector>

#include "pairspec/grid.hpp"
#include "pairspec/spectral_density.hpp"

namespace pairspec {

// Phase-matching amplitude of a collinear type-II pair at detuning nu:
//   phi(nu) = (1 - exp(-i DL nu)) / (i DL nu) = exp(-i DL nu / 2) sinc(DL nu / 2),
// so phi(0) = 1 and |phi|^2 = sinc^2(DL nu / 2).
std::complex<double> pair_amplitude(double dl_ps, double nu_rad_per_ps);

// Gaussian interference filter, parametrized in wavelength.
struct FilterSpec {
  double center_nm = 702.2;
  double fwhm_nm = 83.0;

  void validate() const;
  double transmission_at_wavelength(double lambda_um) const;
  // lambda(nu) = 2 pi c / (center_omega + nu)
  double transmission_at_detuning(double nu_rad_per_ps, double center_omega) const;
};

// Two-photon state sampled on a detuning grid: amplitude[i] = phi(nu_i) for
// the signal branch; the idler carries the conjugate detuning, so single-arm
// quantities depend only on |amplitude|^2.
struct BiphotonState {
  SpectralGrid grid;
  double dl_ps = 0.0;
  double pump_wavelength_um = 0.0;
  std::vector<std::complex<double>> amplitude;
  double tail_mass_estimate = 0.0;  // sinc^2 weight outside [-nu_max, nu_max]
  std::vector<std::string> warnings;
};

// Degenerate center frequency for a given pump: omega = 2 pi c / (2 lambda_p).
double degenerate_center_omega(double pump_wavelength_um);
// Default grid covers `lobes_each_side` sinc^2 lobes on each side of zero
// (nu_max = lobes_each_side * 2 pi / DL; 20 lobes leaves ~1.6% of the weight
// in the clipped tails) with zeros landing exactly on grid points.
SpectralGrid default_grid(double dl_ps, double pump_wavelength_um, int n_points = 4001,
                          double lobes_each_side = 20.0);

// Grid for detection-path spectra.  Same spacing as default_grid, but nu_max
// is widened (up to 0.9 * center) to cover ~2.5x the filter FWHM so the
// broadband background -- whose transform sets the short coherence spike at
// zero path difference -- is represented without truncation ringing.
SpectralGrid detection_grid(double dl_ps, double pump_wavelength_um, const FilterSpec& filter,
                            int n_points = 4001, double lobes_each_side = 20.0);

BiphotonState build_state(const SpectralGrid& grid, double dl_ps, double pump_wavelength_um);

// Reduced single-arm spectra.  For this state the two marginals coincide.
SpectralDensity signal_marginal(const BiphotonState& state);
SpectralDensity idler_marginal(const BiphotonState& state);

// Pointwise filter transmission applied to a density, then renormalized.
SpectralDensity apply_filter(const SpectralDensity& density, const FilterSpec& filter);

}  // namespace pairspec
