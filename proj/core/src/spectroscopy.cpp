#include "pairspec/spectroscopy.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <fstream>
#include <span>
#include <stdexcept>

#include "pairspec/constants.hpp"
#include "pairspec/numerics.hpp"
#include "pairspec/textio.hpp"

namespace pairspec {

std::string to_string(ApodizationWindow w) {
  switch (w) {
    case ApodizationWindow::automatic: return "auto";
    case ApodizationWindow::rectangular: return "rect";
    case ApodizationWindow::hann: return "hann";
  }
  return "?";
}

ApodizationWindow apodization_from_string(const std::string& s) {
  if (s == "auto") return ApodizationWindow::automatic;
  if (s == "rect") return ApodizationWindow::rectangular;
  if (s == "hann") return ApodizationWindow::hann;
  throw std::invalid_argument(fmt::format("unknown window '{}' (auto|rect|hann)", s));
}

std::string to_string(SpikeHandling s) {
  switch (s) {
    case SpikeHandling::fit: return "fit";
    case SpikeHandling::mask: return "mask";
    case SpikeHandling::none: return "none";
  }
  return "?";
}

SpikeHandling spike_handling_from_string(const std::string& s) {
  if (s == "fit") return SpikeHandling::fit;
  if (s == "mask") return SpikeHandling::mask;
  if (s == "none") return SpikeHandling::none;
  throw std::invalid_argument(fmt::format("unknown spike handling '{}' (fit|mask|none)", s));
}

namespace {

std::vector<double> rates_of(const Interferogram& gram) {
  std::vector<double> r(gram.counts.size());
  double inv_dwell = 1.0 / gram.meta.config.dwell_time_s;
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = gram.counts[i] * inv_dwell;
  return r;
}

void check_carrier_resolved(const Interferogram& gram) {
  const auto& cfg = gram.meta.config;
  double carrier_um = 2.0 * kPi * kSpeedOfLightUmPerPs / gram.meta.center_omega;
  double optical_step = (gram.delta_um[1] - gram.delta_um[0]) * cfg.path_factor();
  if (optical_step > carrier_um / 8.0) {
    throw std::invalid_argument(fmt::format(
        "interferogram undersamples the carrier: optical-path step {} um exceeds {} um "
        "(carrier period {} um / 8)",
        optical_step, carrier_um / 8.0, carrier_um));
  }
}

}  // namespace

SpectralDensity recover_spectrum(const Interferogram& gram, const RecoveryOptions& opts) {
  gram.validate();
  if (gram.meta.config.envelope_only) {
    throw std::invalid_argument(
        "recover_spectrum: envelope-only scan carries no carrier phase; "
        "a carrier-resolved interferogram is required");
  }
  check_carrier_resolved(gram);

  const auto& cfg = gram.meta.config;
  const int n = static_cast<int>(gram.delta_um.size());
  const double omega = gram.meta.center_omega;
  const double pf = cfg.path_factor();
  const double dtau = (gram.delta_um[1] - gram.delta_um[0]) * pf / kSpeedOfLightUmPerPs;
  const double tau0 = gram.delta_um[0] * pf / kSpeedOfLightUmPerPs;

  std::vector<double> ac = rates_of(gram);
  double mean = 0.0;
  for (double r : ac) mean += r;
  mean /= n;
  for (double& r : ac) r -= mean;

  double peak = 0.0;
  for (double r : ac) peak = std::max(peak, std::abs(r));
  if (!(peak > 0.0)) throw std::invalid_argument("recover_spectrum: interferogram is constant");

  bool hann = false;
  if (opts.window == ApodizationWindow::hann) {
    hann = true;
  } else if (opts.window == ApodizationWindow::automatic) {
    int band = std::max(3, n / 50);
    double edge = 0.0;
    for (int i = 0; i < band; ++i) {
      edge = std::max({edge, std::abs(ac[i]), std::abs(ac[n - 1 - i])});
    }
    hann = edge > 1e-2 * peak;
  }
  if (hann) {
    for (int k = 0; k < n; ++k) {
      ac[k] *= 0.5 * (1.0 - std::cos(2.0 * kPi * k / (n - 1)));
    }
  }

  const double nyquist = kPi / dtau;
  SpectralGrid grid = [&]() {
    if (opts.target_grid) return *opts.target_grid;
    double dnu = 2.0 * kPi / ((n - 1) * dtau);
    double reach = 0.9 * std::min(omega, nyquist - omega);
    int half_bins = static_cast<int>(std::floor(reach / dnu));
    if (half_bins < 1) {
      throw std::invalid_argument(fmt::format(
          "recover_spectrum: scan cannot resolve any band around the carrier "
          "(Nyquist limit {} rad/ps, carrier {} rad/ps)",
          nyquist, omega));
    }
    return SpectralGrid(omega, half_bins * dnu, 2 * half_bins + 1);
  }();
  if (std::abs(grid.center_omega - omega) > 1e-9 * omega) {
    throw std::invalid_argument(fmt::format(
        "recover_spectrum: target grid center {} rad/ps does not match the recorded carrier {}",
        grid.center_omega, omega));
  }
  if ((grid.center_omega + grid.nu_max) * dtau >= kPi) {
    throw std::invalid_argument(fmt::format(
        "recover_spectrum: target grid reaches {} rad/ps, beyond the scan's Nyquist limit "
        "{} rad/ps; shrink the grid or use a finer scan step",
        grid.center_omega + grid.nu_max, nyquist));
  }

  std::vector<double> weights(grid.n_points, 0.0);
#pragma omp parallel for schedule(static)
  for (int j = 0; j < grid.n_points; ++j) {
    double freq = omega + grid.nu(j);
    std::complex<double> z = std::polar(1.0, freq * tau0);
    const std::complex<double> step = std::polar(1.0, freq * dtau);
    double acc = 0.0;
    for (int k = 0; k < n; ++k) {
      acc += ac[k] * z.real();
      z *= step;
    }
    weights[j] = std::max(0.0, acc * dtau);
  }

  double total = 0.0;
  for (double w : weights) total += w;
  if (!(total > 0.0)) {
    throw std::runtime_error("recover_spectrum: no spectral weight recovered in the target band");
  }
  std::vector<std::string> warnings = gram.meta.warnings;
  warnings.push_back(fmt::format("window={}", hann ? "hann" : "rect"));
  return SpectralDensity::normalized(grid, std::move(weights), "recovered", std::move(warnings));
}

Envelope extract_envelope(const Interferogram& gram) {
  gram.validate();
  const auto& cfg = gram.meta.config;
  Envelope env;
  env.delta_um = gram.delta_um;
  env.convention = cfg.path_convention;
  env.center_omega = gram.meta.center_omega;
  env.config_hash = gram.meta.config_hash;

  const int n = static_cast<int>(gram.delta_um.size());
  std::vector<double> rate = rates_of(gram);
  double mean = 0.0;
  for (double r : rate) mean += r;
  env.mean_rate_cps = mean / n;

  if (cfg.envelope_only) {
    env.carrier_resolved = false;
    env.edge_guard = 0;
    double base = 0.5 * cfg.rate_scale_cps;
    env.visibility.resize(n);
    env.upper_cps = rate;
    env.lower_cps.resize(n);
    for (int i = 0; i < n; ++i) {
      env.visibility[i] = std::clamp(rate[i] / base - 1.0, 0.0, 1.0);
      env.lower_cps[i] = std::max(0.0, 2.0 * base - rate[i]);
    }
    return env;
  }

  check_carrier_resolved(gram);
  const double omega = gram.meta.center_omega;
  const double pf = cfg.path_factor();
  const double step_um = gram.delta_um[1] - gram.delta_um[0];
  // Carrier fringe period expressed on the scan axis.  Each averaging pass
  // spans ~2 periods: windows near an even multiple of the half-period null
  // the demodulation ripple at both omega and 2*omega, and keeping the span
  // short limits how much the averaging widens narrow envelope features.
  const double period_um = 2.0 * kPi * kSpeedOfLightUmPerPs / omega / pf;
  const int half = std::max(1, static_cast<int>(std::lround(period_um / step_um)));

  std::vector<double> re(n), im(n);
  for (int i = 0; i < n; ++i) {
    double phase = -omega * gram.delta_um[i] * pf / kSpeedOfLightUmPerPs;
    re[i] = rate[i] * std::cos(phase);
    im[i] = rate[i] * std::sin(phase);
  }
  // Two cascaded averages: the second pass suppresses the residual 2*omega
  // ripple of the first to second order.
  re = moving_average(moving_average(re, half), half);
  im = moving_average(moving_average(im, half), half);
  std::vector<double> base = moving_average(moving_average(rate, half), half);

  env.carrier_resolved = true;
  env.edge_guard = 2 * half;
  env.visibility.resize(n);
  env.upper_cps.resize(n);
  env.lower_cps.resize(n);
  for (int i = 0; i < n; ++i) {
    double v = base[i] > 0.0 ? 2.0 * std::hypot(re[i], im[i]) / base[i] : 0.0;
    env.visibility[i] = std::clamp(v, 0.0, 1.0);
    env.upper_cps[i] = base[i] * (1.0 + env.visibility[i]);
    env.lower_cps[i] = base[i] * (1.0 - env.visibility[i]);
  }
  return env;
}

void Envelope::write_csv(std::ostream& out) const {
  out << "# fringe envelope\n";
  out << "# config_hash = " << config_hash << '\n';
  out << "# center_omega_rad_per_ps = " << format_double(center_omega) << '\n';
  out << "# path_convention = " << to_string(convention) << '\n';
  out << "# mean_rate_cps = " << format_double(mean_rate_cps) << '\n';
  out << "# carrier_resolved = " << (carrier_resolved ? "true" : "false") << '\n';
  out << "# edge_guard_samples = " << edge_guard << '\n';
  out << "delta_L_um,visibility,upper_cps,lower_cps\n";
  for (std::size_t i = 0; i < delta_um.size(); ++i) {
    out << format_double(delta_um[i]) << ',' << format_double(visibility[i]) << ','
        << format_double(upper_cps[i]) << ',' << format_double(lower_cps[i]) << '\n';
  }
}

void Envelope::write_csv(const std::filesystem::path& path) const {
  std::ofstream out(path);
  if (!out) throw std::runtime_error(fmt::format("cannot write '{}'", path.string()));
  write_csv(out);
  if (!out.good()) throw std::runtime_error(fmt::format("write failed for '{}'", path.string()));
}

namespace {

struct NotchModel {
  double v0 = 0.0;
  double a = 0.0;
  double sse = 0.0;
  int n_used = 0;
};

// Linear least squares for the amplitudes at fixed shape parameters.
// b1 = triangle, b2 = spike (absent when f <= 0); negative amplitudes are
// clamped and the remaining one refit.
NotchModel solve_amplitudes(std::span<const double> x, std::span<const double> v, int lo, int hi,
                            double center, double h, double f, bool use_spike, double mask_um) {
  double s11 = 0.0, s22 = 0.0, s12 = 0.0, s1v = 0.0, s2v = 0.0, svv = 0.0;
  int used = 0;
  const double spike_reach = 4.0 * f;
  const double gauss_scale = f > 0.0 ? -4.0 * std::log(2.0) / (f * f) : 0.0;
  for (int i = lo; i < hi; ++i) {
    double d = x[i] - center;
    if (mask_um > 0.0 && std::abs(d) < mask_um) continue;
    double b1 = std::max(0.0, 1.0 - std::abs(d) / h);
    double b2 = 0.0;
    if (use_spike && std::abs(d) <= spike_reach) b2 = std::exp(gauss_scale * d * d);
    s11 += b1 * b1;
    s22 += b2 * b2;
    s12 += b1 * b2;
    s1v += b1 * v[i];
    s2v += b2 * v[i];
    svv += v[i] * v[i];
    ++used;
  }
  NotchModel m;
  m.n_used = used;
  if (used == 0) {
    m.sse = 0.0;
    return m;
  }
  if (use_spike && s22 > 0.0) {
    double det = s11 * s22 - s12 * s12;
    if (std::abs(det) > 1e-12 * s11 * s22) {
      m.v0 = (s1v * s22 - s2v * s12) / det;
      m.a = (s2v * s11 - s1v * s12) / det;
    }
    if (m.v0 < 0.0 || m.a < 0.0 || std::abs(det) <= 1e-12 * s11 * s22) {
      double only_tri = s11 > 0.0 ? std::max(0.0, s1v / s11) : 0.0;
      double only_spk = s22 > 0.0 ? std::max(0.0, s2v / s22) : 0.0;
      double sse_tri = svv - 2.0 * only_tri * s1v + only_tri * only_tri * s11;
      double sse_spk = svv - 2.0 * only_spk * s2v + only_spk * only_spk * s22;
      if (sse_tri <= sse_spk) {
        m.v0 = only_tri;
        m.a = 0.0;
      } else {
        m.v0 = 0.0;
        m.a = only_spk;
      }
    }
  } else {
    m.v0 = s11 > 0.0 ? std::max(0.0, s1v / s11) : 0.0;
    m.a = 0.0;
  }
  m.sse = svv - 2.0 * (m.v0 * s1v + m.a * s2v) + m.v0 * m.v0 * s11 + m.a * m.a * s22 +
          2.0 * m.v0 * m.a * s12;
  if (m.sse < 0.0) m.sse = 0.0;  // rounding guard
  return m;
}

}  // namespace

EnvelopeFit fit_notch(const Envelope& envelope, const NotchFitOptions& opts) {
  const auto& x = envelope.delta_um;
  const auto& v = envelope.visibility;
  const int n = static_cast<int>(x.size());
  const int lo = std::min(envelope.edge_guard, n);
  const int hi = std::max(lo, n - envelope.edge_guard);
  if (hi - lo < 20) {
    throw std::invalid_argument(fmt::format(
        "fit_notch: insufficient samples ({} usable after edge trimming, need >= 20)", hi - lo));
  }

  EnvelopeFit fit;
  const double span = x[hi - 1] - x[lo];
  const double step = x[1] - x[0];

  double vmax = v[lo], vmin = v[lo];
  for (int i = lo; i < hi; ++i) {
    vmax = std::max(vmax, v[i]);
    vmin = std::min(vmin, v[i]);
  }
  if (vmax - vmin < 1e-9) {
    // Featureless envelope: no notch to fit.
    fit.degenerate = true;
    fit.half_width_um = span;
    fit.base_width_um = 2.0 * span;
    fit.peak_visibility = std::clamp(vmax, 0.0, 1.0);
    fit.center_offset_um = 0.5 * (x[lo] + x[hi - 1]);
    fit.model = "flat";
    return fit;
  }

  // Peak centroid over the top half of the visibility range.
  double thr = vmin + 0.5 * (vmax - vmin);
  double wsum = 0.0, xsum = 0.0;
  for (int i = lo; i < hi; ++i) {
    double w = v[i] - thr;
    if (w > 0.0) {
      wsum += w;
      xsum += w * x[i];
    }
  }
  const double center = xsum / wsum;

  const bool use_spike = opts.spike == SpikeHandling::fit;
  const double mask = opts.spike == SpikeHandling::mask ? opts.mask_halfwidth_um : 0.0;
  const double h_lo = 2.0 * step;
  const double h_hi = span;
  const double f_lo = step;
  const double f_hi = span / 8.0;

  auto best_f_for = [&](double h) -> double {
    if (!use_spike) return 0.0;
    return golden_section_minimize(
        [&](double f) {
          return solve_amplitudes(x, v, lo, hi, center, h, f, true, mask).sse;
        },
        f_lo, f_hi, opts.golden_iterations * 2 / 3);
  };
  auto objective = [&](double h) {
    return solve_amplitudes(x, v, lo, hi, center, h, best_f_for(h), use_spike, mask).sse;
  };

  // Coarse bracket first: the SSE landscape can develop shoulders when the
  // spike competes with the triangle, and golden search alone assumes
  // unimodality.
  const int coarse = 17;
  int best_k = 0;
  double best_sse = 0.0;
  for (int k = 0; k < coarse; ++k) {
    double h = h_lo + (h_hi - h_lo) * k / (coarse - 1);
    double sse = objective(h);
    if (k == 0 || sse < best_sse) {
      best_sse = sse;
      best_k = k;
    }
  }
  double bracket_lo = h_lo + (h_hi - h_lo) * std::max(0, best_k - 1) / (coarse - 1);
  double bracket_hi = h_lo + (h_hi - h_lo) * std::min(coarse - 1, best_k + 1) / (coarse - 1);
  double h_star =
      golden_section_minimize(objective, bracket_lo, bracket_hi, opts.golden_iterations);
  double f_star = best_f_for(h_star);
  NotchModel m = solve_amplitudes(x, v, lo, hi, center, h_star, f_star, use_spike, mask);

  fit.half_width_um = h_star;
  fit.base_width_um = 2.0 * h_star;
  fit.center_offset_um = center;
  fit.peak_visibility = std::clamp(m.v0 + m.a, 0.0, 1.0);
  fit.spike_amplitude = m.a;
  fit.spike_fwhm_um = m.a > 0.0 ? f_star : 0.0;
  fit.residual_rms = m.n_used > 0 ? std::sqrt(m.sse / m.n_used) : 0.0;
  fit.degenerate = h_star >= 0.98 * h_hi;
  fit.model = use_spike ? "triangle+spike" : (mask > 0.0 ? "triangle+mask" : "triangle");
  return fit;
}

void EnvelopeFit::write_keyvalues(std::ostream& out) const {
  out << "model = " << model << '\n';
  out << "base_width_um = " << format_double(base_width_um) << '\n';
  out << "half_width_um = " << format_double(half_width_um) << '\n';
  out << "peak_visibility = " << format_double(peak_visibility) << '\n';
  out << "center_offset_um = " << format_double(center_offset_um) << '\n';
  out << "residual_rms = " << format_double(residual_rms) << '\n';
  out << "spike_amplitude = " << format_double(spike_amplitude) << '\n';
  out << "spike_fwhm_um = " << format_double(spike_fwhm_um) << '\n';
  out << "degenerate = " << (degenerate ? "true" : "false") << '\n';
}

BandwidthEstimate bandwidth_from_base(double base_width_um, PathConvention convention,
                                      double reference_wavelength_nm) {
  if (!(base_width_um > 0.0)) {
    throw std::domain_error(
        fmt::format("bandwidth_from_base: base width must be > 0 um, got {}", base_width_um));
  }
  if (!(reference_wavelength_nm > 0.0)) {
    throw std::domain_error(fmt::format("bandwidth_from_base: reference wavelength must be > 0"));
  }
  BandwidthEstimate est;
  est.reference_wavelength_nm = reference_wavelength_nm;
  // The triangle vanishes at |tau| = DL; on the arm axis that is c DL / 2
  // each side, so the full base equals c DL.
  est.base_width_arm_um =
      convention == PathConvention::optical_path ? 0.5 * base_width_um : base_width_um;
  est.dl_ps = est.base_width_arm_um / kSpeedOfLightUmPerPs;
  est.fwhm_rad_per_ps = 4.0 * kSincSqHalfMaxArg / est.dl_ps;
  est.fwhm_thz = est.fwhm_rad_per_ps / (2.0 * kPi);
  double lambda_um = reference_wavelength_nm * 1e-3;
  est.fwhm_nm = lambda_um * lambda_um * est.fwhm_thz / kSpeedOfLightUmPerPs * 1e3;
  return est;
}

double base_from_bandwidth(double fwhm_nm, PathConvention convention,
                           double reference_wavelength_nm) {
  if (!(fwhm_nm > 0.0) || !(reference_wavelength_nm > 0.0)) {
    throw std::domain_error("base_from_bandwidth: bandwidth and wavelength must be > 0");
  }
  double lambda_um = reference_wavelength_nm * 1e-3;
  double fwhm_thz = fwhm_nm * 1e-3 * kSpeedOfLightUmPerPs / (lambda_um * lambda_um);
  double dl_ps = 4.0 * kSincSqHalfMaxArg / (2.0 * kPi * fwhm_thz);
  double base_arm = dl_ps * kSpeedOfLightUmPerPs;
  return convention == PathConvention::optical_path ? 2.0 * base_arm : base_arm;
}

double l2_relative_distance(const SpectralDensity& a, const SpectralDensity& b) {
  if (!(a.grid == b.grid)) {
    throw std::invalid_argument("l2_relative_distance: densities on different grids");
  }
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < a.weights.size(); ++i) {
    double d = a.weights[i] - b.weights[i];
    num += d * d;
    den += b.weights[i] * b.weights[i];
  }
  if (!(den > 0.0)) throw std::invalid_argument("l2_relative_distance: reference is zero");
  return std::sqrt(num / den);
}

}  // namespace pairspec
