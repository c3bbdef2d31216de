#include "pairspec/numerics.hpp"

#include <algorithm>

namespace pairspec {

HalfMaxWidth full_width_half_max(std::span<const double> axis, std::span<const double> values) {
  HalfMaxWidth out;
  if (axis.size() != values.size() || axis.size() < 3) return out;
  auto peak_it = std::max_element(values.begin(), values.end());
  std::size_t peak = static_cast<std::size_t>(peak_it - values.begin());
  double half = 0.5 * *peak_it;
  if (half <= 0.0) return out;

  // Walk outward from the peak to the first crossing on each side.
  std::size_t i = peak;
  while (i > 0 && values[i] >= half) --i;
  if (values[i] >= half) return out;  // never drops below half on the left
  double t = (half - values[i]) / (values[i + 1] - values[i]);
  out.lo = axis[i] + t * (axis[i + 1] - axis[i]);

  std::size_t j = peak;
  while (j + 1 < values.size() && values[j] >= half) ++j;
  if (values[j] >= half) return out;
  t = (half - values[j - 1]) / (values[j] - values[j - 1]);
  out.hi = axis[j - 1] + t * (axis[j] - axis[j - 1]);

  out.width = out.hi - out.lo;
  out.found = true;
  return out;
}

double golden_section_minimize(const std::function<double(double)>& f, double lo, double hi,
                               int iterations) {
  if (!(lo < hi)) throw std::invalid_argument("golden_section_minimize: empty interval");
  constexpr double inv_phi = 0.6180339887498949;
  double a = lo, b = hi;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c);
  double fd = f(d);
  for (int it = 0; it < iterations && (b - a) > 1e-12 * (std::abs(a) + std::abs(b) + 1.0); ++it) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
  }
  return 0.5 * (a + b);
}

std::vector<double> moving_average(std::span<const double> values, int half_width) {
  const int n = static_cast<int>(values.size());
  std::vector<double> out(values.size(), 0.0);
  if (half_width <= 0) {
    std::copy(values.begin(), values.end(), out.begin());
    return out;
  }
  // Prefix sums keep this O(n); the window shrinks symmetrically at the ends.
  std::vector<double> prefix(values.size() + 1, 0.0);
  for (int i = 0; i < n; ++i) prefix[i + 1] = prefix[i] + values[i];
  for (int i = 0; i < n; ++i) {
    int w = std::min({half_width, i, n - 1 - i});
    out[i] = (prefix[i + w + 1] - prefix[i - w]) / (2 * w + 1);
  }
  return out;
}

}  // namespace pairspec
