#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "pairspec/interferometer.hpp"
#include "pairspec/spectral_density.hpp"

namespace pairspec {

enum class ApodizationWindow { automatic, rectangular, hann };

std::string to_string(ApodizationWindow w);
ApodizationWindow apodization_from_string(const std::string& s);

struct RecoveryOptions {
  ApodizationWindow window = ApodizationWindow::automatic;
  // When absent, a natural grid is used: resolution 2 pi / tau_span, extent
  // limited by the scan's Nyquist band around the carrier.
  std::optional<SpectralGrid> target_grid;
};

// Inverse transform of a carrier-resolved interferogram back to a spectral
// density around the recorded center frequency.  In `automatic` mode the
// scan is apodized with a Hann window only when the AC interferogram has not
// decayed at the scan edges (> 1% of its peak); a fully captured
// interferogram is inverted unwindowed to preserve lineshape fidelity.
SpectralDensity recover_spectrum(const Interferogram& gram, const RecoveryOptions& opts = {});

// Fringe envelope obtained by quadrature demodulation at the carrier and a
// double-pass moving average over ~2 carrier periods.  For envelope-only
// scans the stored counts already trace the envelope and are passed through.
struct Envelope {
  std::vector<double> delta_um;
  std::vector<double> visibility;  // in [0, 1]
  std::vector<double> upper_cps;   // smoothed fringe envelope bounds
  std::vector<double> lower_cps;
  double mean_rate_cps = 0.0;
  bool carrier_resolved = true;
  int edge_guard = 0;  // samples per edge where the smoothing window was truncated
  PathConvention convention = PathConvention::arm_difference;
  double center_omega = 0.0;
  std::string config_hash;

  void write_csv(std::ostream& out) const;
  void write_csv(const std::filesystem::path& path) const;
};

Envelope extract_envelope(const Interferogram& gram);

enum class SpikeHandling { fit, mask, none };

std::string to_string(SpikeHandling s);
SpikeHandling spike_handling_from_string(const std::string& s);

struct NotchFitOptions {
  SpikeHandling spike = SpikeHandling::fit;
  double mask_halfwidth_um = 10.0;  // used by SpikeHandling::mask
  int golden_iterations = 60;
};

// Parameters of the fitted fringe-envelope model
//   V(d) = v0 * max(0, 1 - |d - d0| / h) + a * exp(-4 ln2 (d - d0)^2 / f^2):
// a triangular visibility peak of half-base h (the two "notch" curves traced
// by the upper/lower fringe envelopes) plus an optional narrow coherence
// spike at the center.
struct EnvelopeFit {
  double base_width_um = 0.0;   // full triangle base, 2h, on the scan axis
  double half_width_um = 0.0;   // h
  double peak_visibility = 0.0; // model visibility at the center
  double center_offset_um = 0.0;
  double residual_rms = 0.0;
  double spike_amplitude = 0.0;
  double spike_fwhm_um = 0.0;
  bool degenerate = false;      // search hit its bound; data show no notch
  std::string model;

  void write_keyvalues(std::ostream& out) const;
};

EnvelopeFit fit_notch(const Envelope& envelope, const NotchFitOptions& opts = {});

// Translation between the triangle base and the sinc^2 spectral width.
// All widths are FWHM; the base is normalized to the arm-difference axis
// internally (a scan recorded in optical path has a 2x wider base).
struct BandwidthEstimate {
  double base_width_arm_um = 0.0;
  double dl_ps = 0.0;
  double fwhm_rad_per_ps = 0.0;
  double fwhm_thz = 0.0;
  double fwhm_nm = 0.0;
  double reference_wavelength_nm = 0.0;
  std::string model = "sinc2";
};

BandwidthEstimate bandwidth_from_base(double base_width_um, PathConvention convention,
                                      double reference_wavelength_nm);
// Inverse of the above (returns the base width on the given axis).
double base_from_bandwidth(double fwhm_nm, PathConvention convention,
                           double reference_wavelength_nm);

// Relative L2 distance between two densities on the same grid.
double l2_relative_distance(const SpectralDensity& a, const SpectralDensity& b);

}  // namespace pairspec
