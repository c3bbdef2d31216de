#include "pairspec/interferometer.hpp"

#include <fmt/format.h>

#include <cmath>
#include <fstream>
#include <map>
#include <stdexcept>

#include "pairspec/constants.hpp"
#include "pairspec/keyvalue.hpp"
#include "pairspec/rng.hpp"
#include "pairspec/textio.hpp"

namespace pairspec {

std::string to_string(NoiseModel m) { return m == NoiseModel::none ? "none" : "poisson"; }

std::string to_string(PathConvention c) {
  return c == PathConvention::optical_path ? "optical_path" : "arm_difference";
}

NoiseModel noise_model_from_string(const std::string& s) {
  if (s == "none") return NoiseModel::none;
  if (s == "poisson") return NoiseModel::poisson;
  throw std::invalid_argument(fmt::format("unknown noise model '{}' (none|poisson)", s));
}

PathConvention path_convention_from_string(const std::string& s) {
  if (s == "optical_path") return PathConvention::optical_path;
  if (s == "arm_difference") return PathConvention::arm_difference;
  throw std::invalid_argument(
      fmt::format("unknown path convention '{}' (optical_path|arm_difference)", s));
}

void MichelsonConfig::validate() const {
  if (!(step_um > 0.0)) {
    throw std::invalid_argument(fmt::format("scan step must be > 0 um, got {}", step_um));
  }
  if (!(scan_min_um < scan_max_um)) {
    throw std::invalid_argument(
        fmt::format("scan range [{}, {}] um is empty", scan_min_um, scan_max_um));
  }
  if (!(background_weight >= 0.0) || !(background_weight <= 1.0)) {
    throw std::invalid_argument(
        fmt::format("background weight must lie in [0, 1], got {}", background_weight));
  }
  if (!(rate_scale_cps > 0.0)) {
    throw std::invalid_argument(fmt::format("rate scale must be > 0, got {}", rate_scale_cps));
  }
  if (!(dwell_time_s > 0.0)) {
    throw std::invalid_argument(fmt::format("dwell time must be > 0, got {}", dwell_time_s));
  }
}

int MichelsonConfig::n_points() const {
  double span = (scan_max_um - scan_min_um) / step_um;
  return static_cast<int>(std::floor(span * (1.0 + 1e-12))) + 1;
}

void Interferogram::validate() const {
  if (delta_um.size() != counts.size()) {
    throw std::invalid_argument("interferogram: axis/counts size mismatch");
  }
  if (delta_um.size() < 2) throw std::invalid_argument("interferogram: need at least 2 samples");
  double step = delta_um[1] - delta_um[0];
  if (!(step > 0.0)) throw std::invalid_argument("interferogram: axis must be increasing");
  for (std::size_t i = 1; i < delta_um.size(); ++i) {
    double d = delta_um[i] - delta_um[i - 1];
    if (std::abs(d - step) > 1e-6 * step) {
      throw std::invalid_argument(
          fmt::format("interferogram: non-uniform sampling at row {} (step {} vs {})", i + 1, d,
                      step));
    }
  }
  for (std::size_t i = 0; i < counts.size(); ++i) {
    if (!std::isfinite(counts[i]) || counts[i] < 0.0) {
      throw std::invalid_argument(
          fmt::format("interferogram: counts[{}] = {} invalid", i, counts[i]));
    }
  }
}

SpectralDensity detected_spectrum(const SpectralDensity& filtered_marginal,
                                  const FilterSpec& filter, double background_weight) {
  if (!(background_weight >= 0.0) || !(background_weight <= 1.0)) {
    throw std::invalid_argument(
        fmt::format("background weight must lie in [0, 1], got {}", background_weight));
  }
  const SpectralGrid& grid = filtered_marginal.grid;
  std::vector<double> background(filtered_marginal.weights.size());
  for (int i = 0; i < grid.n_points; ++i) {
    background[i] = filter.transmission_at_detuning(grid.nu(i), grid.center_omega);
  }
  SpectralDensity bg = SpectralDensity::normalized(grid, std::move(background), "background");
  std::vector<double> mixed(filtered_marginal.weights.size());
  for (std::size_t i = 0; i < mixed.size(); ++i) {
    mixed[i] = (1.0 - background_weight) * filtered_marginal.weights[i] +
               background_weight * bg.weights[i];
  }
  return SpectralDensity::normalized(grid, std::move(mixed), "detected",
                                     filtered_marginal.warnings);
}

std::complex<double> spectral_coherence(const SpectralDensity& spectrum, double tau_ps) {
  const SpectralGrid& grid = spectrum.grid;
  const double dnu = grid.spacing();
  // Phase recurrence: exp(i nu_i tau) = exp(i nu_0 tau) * exp(i dnu tau)^i.
  std::complex<double> z = std::polar(1.0, grid.nu(0) * tau_ps);
  const std::complex<double> step = std::polar(1.0, dnu * tau_ps);
  std::complex<double> acc{0.0, 0.0};
  const int n = grid.n_points;
  for (int i = 0; i < n; ++i) {
    double coeff = (i == 0 || i == n - 1) ? 0.5 : 1.0;
    acc += coeff * spectrum.weights[i] * z;
    z *= step;
  }
  return acc * dnu;
}

double counting_rate(const SpectralDensity& spectrum, double delta_um,
                     PathConvention convention, double rate_scale_cps) {
  double factor = convention == PathConvention::optical_path ? 1.0 : 2.0;
  double tau = factor * delta_um / kSpeedOfLightUmPerPs;
  std::complex<double> g = spectral_coherence(spectrum, tau);
  std::complex<double> fringe = std::polar(1.0, spectrum.grid.center_omega * tau) * g;
  return 0.5 * rate_scale_cps * (1.0 + fringe.real());
}

Interferogram simulate_scan(const SpectralDensity& spectrum, const MichelsonConfig& config) {
  config.validate();
  const double omega = spectrum.grid.center_omega;
  const double carrier_um = 2.0 * kPi * kSpeedOfLightUmPerPs / omega;  // in optical path
  const double optical_step = config.step_um * config.path_factor();
  if (!config.envelope_only && optical_step > carrier_um / 8.0) {
    throw std::invalid_argument(fmt::format(
        "scan step {} um ({} um of optical path) undersamples the {}um carrier; "
        "need optical-path steps <= {} um or envelope_only mode",
        config.step_um, optical_step, carrier_um, carrier_um / 8.0));
  }

  const int n = config.n_points();
  Interferogram gram;
  gram.delta_um.resize(n);
  gram.counts.resize(n);
  gram.meta.config = config;
  gram.meta.center_omega = omega;
  gram.meta.label = spectrum.label;
  gram.meta.warnings = spectrum.warnings;

  const double inv_c = config.path_factor() / kSpeedOfLightUmPerPs;
  const double mean_scale = 0.5 * config.rate_scale_cps * config.dwell_time_s;
  const bool sample_noise = config.noise == NoiseModel::poisson;

#pragma omp parallel for schedule(static)
  for (int i = 0; i < n; ++i) {
    double delta = config.delta_at(i);
    double tau = delta * inv_c;
    std::complex<double> g = spectral_coherence(spectrum, tau);
    double expected;
    if (config.envelope_only) {
      expected = mean_scale * (1.0 + std::abs(g));
    } else {
      expected = mean_scale * (1.0 + (std::polar(1.0, omega * tau) * g).real());
    }
    if (expected < 0.0) expected = 0.0;  // guard against rounding at deep nulls
    if (sample_noise) {
      RandomStream stream(config.seed, static_cast<std::uint64_t>(i));
      gram.counts[i] = static_cast<double>(stream.poisson(expected));
    } else {
      gram.counts[i] = expected;
    }
    gram.delta_um[i] = delta;
  }
  gram.validate();
  return gram;
}

void Interferogram::write_csv(std::ostream& out) const {
  out << "# interferogram\n";
  out << "# label = " << meta.label << '\n';
  out << "# config_hash = " << meta.config_hash << '\n';
  out << "# center_omega_rad_per_ps = " << format_double(meta.center_omega) << '\n';
  out << "# scan_min_um = " << format_double(meta.config.scan_min_um) << '\n';
  out << "# scan_max_um = " << format_double(meta.config.scan_max_um) << '\n';
  out << "# step_um = " << format_double(meta.config.step_um) << '\n';
  out << "# background_weight = " << format_double(meta.config.background_weight) << '\n';
  out << "# rate_scale_cps = " << format_double(meta.config.rate_scale_cps) << '\n';
  out << "# dwell_time_s = " << format_double(meta.config.dwell_time_s) << '\n';
  out << "# noise = " << to_string(meta.config.noise) << '\n';
  out << "# seed = " << meta.config.seed << '\n';
  out << "# path_convention = " << to_string(meta.config.path_convention) << '\n';
  out << "# envelope_only = " << (meta.config.envelope_only ? "true" : "false") << '\n';
  for (const auto& w : meta.warnings) out << "# warning: " << w << '\n';
  out << "delta_L_um,counts\n";
  for (std::size_t i = 0; i < delta_um.size(); ++i) {
    out << format_double(delta_um[i]) << ',' << format_double(counts[i]) << '\n';
  }
}

void Interferogram::write_csv(const std::filesystem::path& path) const {
  std::ofstream out(path);
  if (!out) throw std::runtime_error(fmt::format("cannot write '{}'", path.string()));
  write_csv(out);
  if (!out.good()) throw std::runtime_error(fmt::format("write failed for '{}'", path.string()));
}

Interferogram Interferogram::read_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error(fmt::format("cannot open '{}'", path.string()));

  Interferogram gram;
  std::map<std::string, std::string> header;
  std::string line;
  int lineno = 0;
  bool columns_seen = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#') {
      if (line.rfind("# warning:", 0) == 0) {
        gram.meta.warnings.push_back(line.substr(10));
        continue;
      }
      auto eq = line.find('=');
      if (eq != std::string::npos) {
        auto trim = [](std::string s) {
          auto b = s.find_first_not_of(" \t");
          auto e = s.find_last_not_of(" \t");
          return b == std::string::npos ? std::string{} : s.substr(b, e - b + 1);
        };
        header[trim(line.substr(1, eq - 1))] = trim(line.substr(eq + 1));
      }
      continue;
    }
    if (!columns_seen) {
      if (line != "delta_L_um,counts") {
        throw std::runtime_error(fmt::format(
            "{}:{}: expected header 'delta_L_um,counts', got '{}'", path.string(), lineno, line));
      }
      columns_seen = true;
      continue;
    }
    auto comma = line.find(',');
    if (comma == std::string::npos) {
      throw std::runtime_error(
          fmt::format("{}:{}: expected 'delta,counts', got '{}'", path.string(), lineno, line));
    }
    std::string ctx = fmt::format("{}:{}", path.string(), lineno);
    gram.delta_um.push_back(parse_double_strict(line.substr(0, comma), ctx));
    gram.counts.push_back(parse_double_strict(line.substr(comma + 1), ctx));
  }

  auto want = [&](const char* key) -> std::string {
    auto it = header.find(key);
    if (it == header.end()) {
      throw std::runtime_error(
          fmt::format("{}: missing '# {} = ...' header", path.string(), key));
    }
    return it->second;
  };
  MichelsonConfig& cfg = gram.meta.config;
  gram.meta.center_omega =
      parse_double_strict(want("center_omega_rad_per_ps"), path.string());
  cfg.scan_min_um = parse_double_strict(want("scan_min_um"), path.string());
  cfg.scan_max_um = parse_double_strict(want("scan_max_um"), path.string());
  cfg.step_um = parse_double_strict(want("step_um"), path.string());
  cfg.background_weight = parse_double_strict(want("background_weight"), path.string());
  cfg.rate_scale_cps = parse_double_strict(want("rate_scale_cps"), path.string());
  cfg.dwell_time_s = parse_double_strict(want("dwell_time_s"), path.string());
  cfg.noise = noise_model_from_string(want("noise"));
  cfg.seed = static_cast<std::uint64_t>(parse_int_strict(want("seed"), path.string()));
  cfg.path_convention = path_convention_from_string(want("path_convention"));
  cfg.envelope_only = want("envelope_only") == "true";
  if (auto it = header.find("label"); it != header.end()) gram.meta.label = it->second;
  if (auto it = header.find("config_hash"); it != header.end()) {
    gram.meta.config_hash = it->second;
  }

  gram.validate();
  return gram;
}

}  // namespace pairspec
