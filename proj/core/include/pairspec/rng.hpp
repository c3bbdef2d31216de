#pragma once

#include <cstdint>

namespace pairspec {

// Deterministic per-sample random stream: the state is derived from
// (seed, stream index) alone, so stream i of a scan produces the same draws
// no matter how the scan points are scheduled across threads.
class RandomStream {
 public:
  RandomStream(std::uint64_t seed, std::uint64_t stream_index);

  std::uint64_t next_u64();
  double next_unit();    // uniform in [0, 1)
  double next_normal();  // standard normal (Box-Muller)

  // Poisson sample.  Exact product method for small means, Gaussian
  // approximation rounded and clamped at zero for large ones.
  std::uint64_t poisson(double mean);

 private:
  std::uint64_t state_;
};

}  // namespace pairspec
