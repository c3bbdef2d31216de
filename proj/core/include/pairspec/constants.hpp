#pragma once

#include <cmath>

// Unit system used throughout: lengths in micrometers (crystal lengths in mm
// where the name says so), times in picoseconds, angular frequencies in
// rad/ps, plain frequencies in THz.  Group-velocity mismatch is quoted in
// ps per mm of crystal.
namespace pairspec {

inline constexpr double kPi = 3.14159265358979323846;

inline constexpr double kSpeedOfLightUmPerPs = 299.792458;
inline constexpr double kSpeedOfLightMmPerPs = 0.299792458;

// Positive root of sinc^2(x) = 1/2, i.e. the half-width of sinc^2 at half
// maximum in the dimensionless argument.  (Frozen from a bisection solve;
// the test suite re-derives it independently.)
inline constexpr double kSincSqHalfMaxArg = 1.3915573782521;

// Analytic normalization of the continuum pair amplitude, sqrt(DL / 4 pi).
// Reported for reference only: sampled densities are renormalized on their
// grid instead of trusting a convention-dependent prefactor.
inline double pair_amplitude_normalization(double dl_ps) {
  return std::sqrt(dl_ps / (4.0 * kPi));
}

}  // namespace pairspec
