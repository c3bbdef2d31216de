#pragma once

#include <vector>

namespace pairspec {

// Uniform, symmetric detuning grid nu in [-nu_max, +nu_max] (rad/ps) around a
// carrier center_omega (rad/ps).  n_points is odd so nu = 0 is a sample.
struct SpectralGrid {
  SpectralGrid(double center_omega_rad_per_ps, double nu_max_rad_per_ps, int n_points);

  double center_omega = 0.0;
  double nu_max = 0.0;
  int n_points = 0;

  double spacing() const { return 2.0 * nu_max / (n_points - 1); }
  int center_index() const { return (n_points - 1) / 2; }
  double nu(int i) const { return -nu_max + spacing() * i; }
  std::vector<double> nus() const;

  bool operator==(const SpectralGrid&) const = default;
};

}  // namespace pairspec
