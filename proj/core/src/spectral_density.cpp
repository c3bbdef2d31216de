#include "pairspec/spectral_density.hpp"

#include <fmt/format.h>

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "pairspec/keyvalue.hpp"
#include "pairspec/numerics.hpp"
#include "pairspec/textio.hpp"

namespace pairspec {

SpectralDensity SpectralDensity::normalized(SpectralGrid grid, std::vector<double> raw,
                                            std::string label,
                                            std::vector<std::string> warnings) {
  if (static_cast<int>(raw.size()) != grid.n_points) {
    throw std::invalid_argument(fmt::format("SpectralDensity '{}': {} weights on a {}-point grid",
                                            label, raw.size(), grid.n_points));
  }
  for (std::size_t i = 0; i < raw.size(); ++i) {
    if (!(raw[i] >= 0.0) || !std::isfinite(raw[i])) {
      throw std::invalid_argument(fmt::format(
          "SpectralDensity '{}': weight[{}] = {} is not a finite nonnegative number", label, i,
          raw[i]));
    }
  }
  double total = trapezoid(raw, grid.spacing());
  if (!(total > 0.0)) {
    throw std::invalid_argument(fmt::format("SpectralDensity '{}': zero total weight", label));
  }
  for (auto& w : raw) w /= total;
  return SpectralDensity{grid, std::move(raw), std::move(label), std::move(warnings)};
}

double SpectralDensity::integral() const { return trapezoid(weights, grid.spacing()); }

std::vector<double> SpectralDensity::masses() const {
  double sum = 0.0;
  for (double w : weights) sum += w;
  std::vector<double> q(weights.size());
  for (std::size_t i = 0; i < q.size(); ++i) q[i] = weights[i] / sum;
  return q;
}

void SpectralDensity::write_csv(std::ostream& out) const {
  out << "# label: " << label << "\n";
  out << "# center_omega_rad_per_ps = " << format_double(grid.center_omega) << "\n";
  for (const auto& w : warnings) out << "# warning: " << w << "\n";
  out << "nu_rad_per_ps,weight\n";
  for (int i = 0; i < grid.n_points; ++i) {
    out << format_double(grid.nu(i)) << ',' << format_double(weights[i]) << '\n';
  }
}

void SpectralDensity::write_csv(const std::filesystem::path& path) const {
  std::ofstream out(path);
  if (!out) throw std::runtime_error(fmt::format("cannot write '{}'", path.string()));
  write_csv(out);
  if (!out.good()) throw std::runtime_error(fmt::format("write failed for '{}'", path.string()));
}

DensitySamples DensitySamples::read_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error(fmt::format("cannot open '{}'", path.string()));
  DensitySamples out;
  std::string line;
  int lineno = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#') {
      if (line.rfind("# label:", 0) == 0) {
        out.label = line.substr(8);
        if (!out.label.empty() && out.label.front() == ' ') out.label.erase(0, 1);
      } else if (line.rfind("# center_omega_rad_per_ps", 0) == 0) {
        auto eq = line.find('=');
        if (eq != std::string::npos) {
          std::string tok = line.substr(eq + 1);
          auto b = tok.find_first_not_of(" \t");
          auto e = tok.find_last_not_of(" \t");
          tok = (b == std::string::npos) ? "" : tok.substr(b, e - b + 1);
          out.center_omega =
              parse_double_strict(tok, fmt::format("{}:{}", path.string(), lineno));
        }
      }
      continue;
    }
    if (!header_seen) {
      if (line != "nu_rad_per_ps,weight") {
        throw std::runtime_error(fmt::format(
            "{}:{}: expected header 'nu_rad_per_ps,weight', got '{}'", path.string(), lineno,
            line));
      }
      header_seen = true;
      continue;
    }
    auto comma = line.find(',');
    if (comma == std::string::npos) {
      throw std::runtime_error(
          fmt::format("{}:{}: expected 'nu,weight', got '{}'", path.string(), lineno, line));
    }
    std::string ctx = fmt::format("{}:{}", path.string(), lineno);
    out.nu.push_back(parse_double_strict(line.substr(0, comma), ctx));
    out.weight.push_back(parse_double_strict(line.substr(comma + 1), ctx));
  }
  if (out.nu.empty()) {
    throw std::runtime_error(fmt::format("{}: no data rows", path.string()));
  }
  return out;
}

SpectralDensity DensitySamples::to_density(std::optional<double> fallback_center_omega) const {
  const int n = static_cast<int>(nu.size());
  if (n < 3) throw std::invalid_argument("density samples: need at least 3 points");
  double dx = nu[1] - nu[0];
  for (int i = 1; i < n; ++i) {
    double step = nu[i] - nu[i - 1];
    if (std::abs(step - dx) > 1e-9 * std::max(std::abs(dx), 1.0)) {
      throw std::invalid_argument(
          fmt::format("density samples: non-uniform axis at row {}", i + 1));
    }
  }
  if (std::abs(nu.front() + nu.back()) > 1e-9 * std::abs(nu.back())) {
    throw std::invalid_argument("density samples: axis not symmetric about zero");
  }
  std::optional<double> omega = center_omega ? center_omega : fallback_center_omega;
  if (!omega) throw std::invalid_argument("density samples: no center frequency available");
  SpectralGrid grid(*omega, nu.back(), n);
  return SpectralDensity::normalized(grid, weight, label.empty() ? "external" : label);
}

}  // namespace pairspec
