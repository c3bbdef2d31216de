#include "pairspec/grid.hpp"

#include <fmt/format.h>

#include <stdexcept>

namespace pairspec {

SpectralGrid::SpectralGrid(double center_omega_rad_per_ps, double nu_max_rad_per_ps, int n)
    : center_omega(center_omega_rad_per_ps), nu_max(nu_max_rad_per_ps), n_points(n) {
  if (!(center_omega > 0.0)) {
    throw std::invalid_argument(fmt::format("SpectralGrid: center_omega must be > 0, got {}",
                                            center_omega));
  }
  if (!(nu_max > 0.0)) {
    throw std::invalid_argument(fmt::format("SpectralGrid: nu_max must be > 0, got {}", nu_max));
  }
  if (n_points < 3 || n_points % 2 == 0) {
    throw std::invalid_argument(
        fmt::format("SpectralGrid: n_points must be odd and >= 3, got {}", n_points));
  }
  if (nu_max >= center_omega) {
    // lambda(nu) = 2 pi c / (omega + nu) must stay positive across the grid.
    throw std::invalid_argument(fmt::format(
        "SpectralGrid: nu_max {} reaches below zero absolute frequency (center {})", nu_max,
        center_omega));
  }
}

std::vector<double> SpectralGrid::nus() const {
  std::vector<double> out(n_points);
  for (int i = 0; i < n_points; ++i) out[i] = nu(i);
  return out;
}

}  // namespace pairspec
