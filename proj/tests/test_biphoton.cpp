#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <filesystem>
#include <stdexcept>

#include "pairspec/biphoton.hpp"
#include "pairspec/constants.hpp"
#include "pairspec/numerics.hpp"

using namespace pairspec;

namespace {

// Half-max argument of sinc^2 solved by bisection, independent of the
// frozen constant.
double solve_sincsq_half_max() {
  auto f = [](double x) {
    double s = std::sin(x) / x;
    return s * s - 0.5;
  };
  double lo = 1.0, hi = 2.0;  // sinc^2: 0.708 at 1, 0.207 at 2
  for (int i = 0; i < 200; ++i) {
    double mid = 0.5 * (lo + hi);
    (f(mid) > 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

TEST_CASE("pair amplitude basics") {
  const double dl = 0.7506;
  CHECK(pair_amplitude(dl, 0.0) == std::complex<double>(1.0, 0.0));

  for (double nu : {-20.0, -3.7, 0.31, 8.0, 150.0}) {
    auto phi = pair_amplitude(dl, nu);
    double half = 0.5 * dl * nu;
    // Modulus and phase separately: |phi| = |sinc|, arg = -DL nu / 2 (mod pi).
    CHECK(std::norm(phi) == doctest::Approx(sinc(half) * sinc(half)).epsilon(1e-14));
    // Direct form (1 - e^{-i DL nu}) / (i DL nu).
    std::complex<double> i_unit(0.0, 1.0);
    auto direct = (1.0 - std::exp(-i_unit * (dl * nu))) / (i_unit * dl * nu);
    CHECK(std::abs(phi - direct) < 1e-14);
  }

  CHECK_THROWS_AS(pair_amplitude(0.0, 1.0), std::domain_error);
  CHECK_THROWS_AS(pair_amplitude(-1.0, 1.0), std::domain_error);
}

TEST_CASE("half-max constant matches an independent bisection") {
  CHECK(kSincSqHalfMaxArg == doctest::Approx(solve_sincsq_half_max()).epsilon(1e-12));
}

TEST_CASE("degenerate center frequency") {
  CHECK(degenerate_center_omega(0.3511) == doctest::Approx(2682.500095854248).epsilon(1e-12));
  // omega = 2 pi c / (2 lambda_p) by definition.
  CHECK(degenerate_center_omega(0.3511) ==
        doctest::Approx(2.0 * kPi * kSpeedOfLightUmPerPs / 0.7022).epsilon(1e-15));
  CHECK_THROWS_AS(degenerate_center_omega(0.0), std::invalid_argument);
}

TEST_CASE("grid construction and validation") {
  const double dl = 0.7506;
  auto grid = default_grid(dl, 0.3511, 4001, 20.0);
  CHECK(grid.n_points == 4001);
  CHECK(grid.nu_max == doctest::Approx(20.0 * 2.0 * kPi / dl).epsilon(1e-15));
  CHECK(grid.center_index() == 2000);
  CHECK(grid.nu(grid.center_index()) == doctest::Approx(0.0));

  CHECK_THROWS_AS(SpectralGrid(2682.5, 100.0, 4000), std::invalid_argument);  // even
  CHECK_THROWS_AS(SpectralGrid(2682.5, 100.0, 1), std::invalid_argument);     // too short
  CHECK_THROWS_AS(SpectralGrid(2682.5, 3000.0, 101), std::invalid_argument);  // nu_max >= omega
  CHECK_THROWS_AS(SpectralGrid(-1.0, 10.0, 101), std::invalid_argument);
}

TEST_CASE("detection grid keeps spacing and covers the filter") {
  const double dl = 0.7506;
  FilterSpec filter;  // 83 nm at 702.2 nm -> FWHM 317.07 rad/ps
  auto narrow = default_grid(dl, 0.3511, 4001, 20.0);
  auto wide = detection_grid(dl, 0.3511, filter, 4001, 20.0);

  CHECK(wide.spacing() == doctest::Approx(narrow.spacing()).epsilon(1e-12));
  CHECK(wide.n_points % 2 == 1);
  CHECK(wide.nu_max >= 2.5 * 317.071358524 - wide.spacing());
  CHECK(wide.nu_max < wide.center_omega);

  // A very wide filter is clamped so wavelengths stay positive.
  FilterSpec huge;
  huge.fwhm_nm = 2000.0;
  auto clamped = detection_grid(dl, 0.3511, huge, 4001, 20.0);
  CHECK(clamped.nu_max < clamped.center_omega);
  CHECK(clamped.nu_max >= 0.9 * clamped.center_omega - clamped.spacing());

  // A narrow filter changes nothing.
  FilterSpec tight;
  tight.fwhm_nm = 1.0;
  auto same = detection_grid(dl, 0.3511, tight, 4001, 20.0);
  CHECK(same.n_points == narrow.n_points);
  CHECK(same.nu_max == doctest::Approx(narrow.nu_max).epsilon(1e-12));
}

TEST_CASE("state construction and marginals") {
  const double dl = 0.7506;
  auto grid = default_grid(dl, 0.3511);
  auto state = build_state(grid, dl, 0.3511);

  CHECK(state.amplitude.size() == static_cast<std::size_t>(grid.n_points));
  CHECK(state.amplitude[grid.center_index()] == std::complex<double>(1.0, 0.0));
  CHECK(state.tail_mass_estimate == doctest::Approx(2.0 / (kPi * 0.5 * dl * grid.nu_max)));
  CHECK(state.warnings.empty());  // 20 lobes is plenty

  auto starved = build_state(default_grid(dl, 0.3511, 401, 3.0), dl, 0.3511);
  REQUIRE(starved.warnings.size() == 1);
  CHECK(starved.warnings[0].find("truncated-tails") == 0);

  auto sig = signal_marginal(state);
  auto idl = idler_marginal(state);
  REQUIRE(sig.weights.size() == idl.weights.size());
  for (std::size_t i = 0; i < sig.weights.size(); ++i) {
    CHECK(sig.weights[i] == idl.weights[i]);
  }
  CHECK(sig.integral() == doctest::Approx(1.0).epsilon(1e-12));

  double mass = 0.0;
  for (double m : sig.masses()) mass += m;
  CHECK(mass == doctest::Approx(1.0).epsilon(1e-12));

  // |amplitude|^2 is proportional to sinc^2(DL nu / 2): check the shape
  // against the marginal at a few detunings via ratios.
  double w0 = sig.weight_at_zero();
  for (int k : {100, 700, 1500, 1900}) {
    double nu = grid.nu(k);
    double expect = sinc(0.5 * dl * nu) * sinc(0.5 * dl * nu);
    CHECK(sig.weights[k] / w0 == doctest::Approx(expect).epsilon(1e-12));
  }
}

TEST_CASE("marginal width matches the dimensionless half-max solution") {
  const double dl = 0.7506;
  // Dense grid so the interpolated crossing carries ~1e-5 relative error.
  auto grid = default_grid(dl, 0.3511, 40001, 20.0);
  auto sig = signal_marginal(build_state(grid, dl, 0.3511));
  auto axis = grid.nus();
  auto width = full_width_half_max(axis, sig.weights);
  REQUIRE(width.found);
  double expected = 4.0 * solve_sincsq_half_max() / dl;
  CHECK(width.width == doctest::Approx(expected).epsilon(1e-4));
  CHECK(expected == doctest::Approx(7.415706785250).epsilon(1e-12));
}

TEST_CASE("filter transmission") {
  FilterSpec f;
  f.validate();
  CHECK(f.transmission_at_wavelength(0.7022) == 1.0);
  // Half maximum at center +- FWHM/2 by construction.
  CHECK(f.transmission_at_wavelength(0.7022 + 0.0415) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(f.transmission_at_wavelength(0.7022 - 0.0415) == doctest::Approx(0.5).epsilon(1e-12));

  const double omega = degenerate_center_omega(0.3511);
  CHECK(f.transmission_at_detuning(0.0, omega) == doctest::Approx(1.0).epsilon(1e-12));
  // Detuning form agrees with the wavelength form through lambda(nu).
  for (double nu : {-300.0, -50.0, 75.0, 400.0}) {
    double lam = 2.0 * kPi * kSpeedOfLightUmPerPs / (omega + nu);
    CHECK(f.transmission_at_detuning(nu, omega) ==
          doctest::Approx(f.transmission_at_wavelength(lam)).epsilon(1e-12));
  }

  FilterSpec bad;
  bad.fwhm_nm = 0.0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("filtering renormalizes and relabels") {
  const double dl = 0.7506;
  auto grid = default_grid(dl, 0.3511);
  auto sig = signal_marginal(build_state(grid, dl, 0.3511));

  FilterSpec f;
  auto filtered = apply_filter(sig, f);
  CHECK(filtered.integral() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(filtered.label.find("filtered(") == 0);

  // An essentially flat filter leaves the shape alone.
  FilterSpec flat;
  flat.fwhm_nm = 1e6;
  auto same = apply_filter(sig, flat);
  for (int k : {0, 1000, 2000, 3000, 4000}) {
    CHECK(same.weights[k] == doctest::Approx(sig.weights[k]).epsilon(1e-9));
  }
}

TEST_CASE("density CSV roundtrip") {
  const double dl = 0.7506;
  auto grid = default_grid(dl, 0.3511, 401, 20.0);
  auto sig = signal_marginal(build_state(grid, dl, 0.3511));

  auto path = std::filesystem::temp_directory_path() / "pairspec_test_density.csv";
  sig.write_csv(path);
  auto samples = DensitySamples::read_csv(path);
  CHECK(samples.label == sig.label);
  REQUIRE(samples.center_omega.has_value());
  CHECK(*samples.center_omega == doctest::Approx(grid.center_omega).epsilon(1e-15));

  auto back = samples.to_density();
  CHECK(back.grid.n_points == grid.n_points);
  CHECK(back.grid.nu_max == doctest::Approx(grid.nu_max).epsilon(1e-12));
  for (int k = 0; k < grid.n_points; ++k) {
    CHECK(back.weights[k] == doctest::Approx(sig.weights[k]).epsilon(1e-12));
  }
  std::filesystem::remove(path);
}

TEST_CASE("normalized() rejects bad weights") {
  SpectralGrid grid(2682.5, 10.0, 5);
  CHECK_THROWS_AS(SpectralDensity::normalized(grid, {0, 0, 0, 0, 0}, "zero"),
                  std::invalid_argument);
  CHECK_THROWS_AS(SpectralDensity::normalized(grid, {1, -1, 1, 1, 1}, "neg"),
                  std::invalid_argument);
  CHECK_THROWS_AS(SpectralDensity::normalized(grid, {1, 1, 1}, "short"), std::invalid_argument);
}
