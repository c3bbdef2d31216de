#include "pairspec/rng.hpp"

#include <fmt/format.h>

#include <cmath>
#include <stdexcept>

namespace pairspec {

namespace {

constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ull;

// splitmix64 finalizer (Steele, Lea, Flood 2014).
std::uint64_t mix(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

constexpr double kPoissonExactCutoff = 16.0;

}  // namespace

RandomStream::RandomStream(std::uint64_t seed, std::uint64_t stream_index)
    : state_(mix(seed) ^ mix(stream_index * kGolden + 1)) {}

std::uint64_t RandomStream::next_u64() {
  state_ += kGolden;
  return mix(state_);
}

double RandomStream::next_unit() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double RandomStream::next_normal() {
  // Box-Muller; u1 shifted into (0, 1] so the log argument never vanishes.
  double u1 = (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;
  double u2 = next_unit();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * 3.14159265358979323846 * u2);
}

std::uint64_t RandomStream::poisson(double mean) {
  if (!(mean >= 0.0) || !std::isfinite(mean)) {
    throw std::domain_error(fmt::format("poisson: mean must be finite and >= 0, got {}", mean));
  }
  if (mean == 0.0) return 0;
  if (mean <= kPoissonExactCutoff) {
    // Knuth's product-of-uniforms method.
    double threshold = std::exp(-mean);
    std::uint64_t k = 0;
    double product = next_unit();
    while (product > threshold) {
      ++k;
      product *= next_unit();
    }
    return k;
  }
  double sample = std::round(mean + std::sqrt(mean) * next_normal());
  return sample <= 0.0 ? 0 : static_cast<std::uint64_t>(sample);
}

}  // namespace pairspec
