#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <span>
#include <stdexcept>
#include <vector>

namespace pairspec {

// sin(x)/x with the removable singularity filled in.
inline double sinc(double x) {
  if (std::abs(x) < 1e-4) {
    double x2 = x * x;
    return 1.0 - x2 / 6.0 + x2 * x2 / 120.0;
  }
  return std::sin(x) / x;
}

// Trapezoid rule on a uniform grid.
inline double trapezoid(std::span<const double> y, double dx) {
  if (y.size() < 2) return 0.0;
  double acc = 0.5 * (y.front() + y.back());
  for (std::size_t i = 1; i + 1 < y.size(); ++i) acc += y[i];
  return acc * dx;
}

struct HalfMaxWidth {
  double width = 0.0;
  double lo = 0.0;
  double hi = 0.0;
  bool found = false;
};

// Full width at half maximum of a sampled curve, with linear interpolation of
// the two outermost half-maximum crossings around the global peak.
HalfMaxWidth full_width_half_max(std::span<const double> axis, std::span<const double> values);

// Golden-section minimizer for a unimodal objective on [lo, hi].
double golden_section_minimize(const std::function<double(double)>& f, double lo, double hi,
                               int iterations = 120);

// Centered moving average with the window truncated symmetrically near the
// edges (output has the same length as the input).  half_width is in samples.
std::vector<double> moving_average(std::span<const double> values, int half_width);

}  // namespace pairspec
