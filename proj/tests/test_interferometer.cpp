#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <filesystem>
#include <fstream>
#include <stdexcept>

#include "pairspec/biphoton.hpp"
#include "pairspec/constants.hpp"
#include "pairspec/interferometer.hpp"
#include "pairspec/rng.hpp"

using namespace pairspec;

namespace {

const double kDl = 0.7506;

SpectralDensity sinc_marginal(int n_points = 4001, double lobes = 20.0) {
  auto grid = default_grid(kDl, 0.3511, n_points, lobes);
  return signal_marginal(build_state(grid, kDl, 0.3511));
}

// All weight in the central bin: a monochromatic line at the carrier.
SpectralDensity monochromatic_line() {
  SpectralGrid grid(degenerate_center_omega(0.3511), 10.0, 5);
  return SpectralDensity::normalized(grid, {0.0, 0.0, 1.0, 0.0, 0.0}, "line");
}

}  // namespace

TEST_CASE("michelson config validation and axis") {
  MichelsonConfig mc;
  CHECK_NOTHROW(mc.validate());
  CHECK(mc.n_points() == 12001);
  CHECK(mc.delta_at(0) == -150.0);
  CHECK(mc.delta_at(mc.n_points() - 1) == doctest::Approx(150.0).epsilon(1e-12));
  CHECK(mc.path_factor() == 2.0);
  mc.path_convention = PathConvention::optical_path;
  CHECK(mc.path_factor() == 1.0);

  auto bad = MichelsonConfig{};
  bad.step_um = 0.0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = MichelsonConfig{};
  bad.scan_min_um = 10.0;
  bad.scan_max_um = -10.0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = MichelsonConfig{};
  bad.background_weight = 1.5;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = MichelsonConfig{};
  bad.rate_scale_cps = 0.0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("enum spellings round-trip") {
  for (auto m : {NoiseModel::none, NoiseModel::poisson}) {
    CHECK(noise_model_from_string(to_string(m)) == m);
  }
  for (auto c : {PathConvention::optical_path, PathConvention::arm_difference}) {
    CHECK(path_convention_from_string(to_string(c)) == c);
  }
  CHECK_THROWS_AS(noise_model_from_string("gaussian"), std::invalid_argument);
  CHECK_THROWS_AS(path_convention_from_string("mirror"), std::invalid_argument);
}

TEST_CASE("detected spectrum mixes filter profile into the marginal") {
  auto marginal = sinc_marginal(401, 20.0);
  FilterSpec filter;
  auto filtered = apply_filter(marginal, filter);

  auto pure = detected_spectrum(filtered, filter, 0.0);
  for (std::size_t i = 0; i < pure.weights.size(); ++i) {
    CHECK(pure.weights[i] == doctest::Approx(filtered.weights[i]).epsilon(1e-12));
  }

  auto background = detected_spectrum(filtered, filter, 1.0);
  CHECK(background.integral() == doctest::Approx(1.0).epsilon(1e-12));
  // w = 1 leaves only the filter profile: ratios follow the transmission.
  const double omega = background.grid.center_omega;
  double t0 = filter.transmission_at_detuning(0.0, omega);
  double w0 = background.weight_at_zero();
  for (int k : {10, 100, 300}) {
    double t = filter.transmission_at_detuning(background.grid.nu(k), omega);
    CHECK(background.weights[k] / w0 == doctest::Approx(t / t0).epsilon(1e-12));
  }

  CHECK_THROWS_AS(detected_spectrum(filtered, filter, -0.1), std::invalid_argument);
  CHECK_THROWS_AS(detected_spectrum(filtered, filter, 1.1), std::invalid_argument);
}

TEST_CASE("spectral coherence basics") {
  auto marginal = sinc_marginal();
  CHECK(spectral_coherence(marginal, 0.0).real() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(spectral_coherence(marginal, 0.0).imag() == doctest::Approx(0.0));
  for (double tau : {0.1, 0.33, 0.8, 2.0}) {
    auto g = spectral_coherence(marginal, tau);
    CHECK(std::abs(g) <= 1.0 + 1e-12);
    // Symmetric spectrum: G is real up to rounding.
    CHECK(std::abs(g.imag()) < 1e-9);
    // Time-reversal: G(-tau) = conj(G(tau)).
    auto gm = spectral_coherence(marginal, -tau);
    CHECK(std::abs(gm - std::conj(g)) < 1e-12);
  }
}

TEST_CASE("sinc^2 spectrum gives the triangular coherence") {
  auto marginal = sinc_marginal();
  for (double frac : {0.2, 0.5, 0.8}) {
    double tau = frac * kDl;
    CHECK(std::abs(spectral_coherence(marginal, tau)) ==
          doctest::Approx(1.0 - frac).epsilon(0.01));
  }
  // Past the base the coherence is gone (small truncation ripple remains).
  CHECK(std::abs(spectral_coherence(marginal, kDl)) < 0.02);
  CHECK(std::abs(spectral_coherence(marginal, 1.3 * kDl)) < 0.02);
}

TEST_CASE("counting rate: normalization and convention factor") {
  auto line = monochromatic_line();
  const double omega = line.grid.center_omega;
  const double rs = 20000.0;

  CHECK(counting_rate(line, 0.0, PathConvention::arm_difference, rs) ==
        doctest::Approx(rs).epsilon(1e-12));

  // Monochromatic input: a pure cosine in the optical path difference.
  for (double delta : {0.3, 1.7, 12.1}) {
    double expect_opt = 0.5 * rs * (1.0 + std::cos(omega * delta / kSpeedOfLightUmPerPs));
    CHECK(counting_rate(line, delta, PathConvention::optical_path, rs) ==
          doctest::Approx(expect_opt).epsilon(1e-9));
    // Arm-difference convention doubles the optical path.
    CHECK(counting_rate(line, delta, PathConvention::arm_difference, rs) ==
          doctest::Approx(counting_rate(line, 2.0 * delta, PathConvention::optical_path, rs))
              .epsilon(1e-9));
  }
}

TEST_CASE("noise-free scan: symmetry, bounds, and envelope-only mode") {
  auto marginal = sinc_marginal(2001, 20.0);
  MichelsonConfig mc;
  mc.scan_min_um = -30.0;
  mc.scan_max_um = 30.0;
  mc.step_um = 0.05;
  mc.path_convention = PathConvention::optical_path;  // finer optical sampling not needed
  mc.noise = NoiseModel::none;

  auto gram = simulate_scan(marginal, mc);
  CHECK(gram.delta_um.size() == static_cast<std::size_t>(mc.n_points()));
  CHECK(gram.meta.center_omega == marginal.grid.center_omega);
  CHECK(gram.meta.label == marginal.label);
  CHECK_NOTHROW(gram.validate());

  const double top = mc.rate_scale_cps * mc.dwell_time_s;
  int n = static_cast<int>(gram.counts.size());
  for (int i = 0; i < n; ++i) {
    CHECK(gram.counts[i] >= 0.0);
    CHECK(gram.counts[i] <= top * (1.0 + 1e-9));
    // Even in delta for this symmetric spectrum.
    CHECK(gram.counts[i] == doctest::Approx(gram.counts[n - 1 - i]).epsilon(1e-9));
  }
  // Zero path difference: constructive fringe at the full rate.
  CHECK(gram.counts[n / 2] == doctest::Approx(top).epsilon(1e-9));

  auto mc_env = mc;
  mc_env.envelope_only = true;
  mc_env.step_um = 1.0;  // coarse is fine without a carrier
  auto env = simulate_scan(marginal, mc_env);
  double mean_scale = 0.5 * mc.rate_scale_cps * mc.dwell_time_s;
  for (std::size_t i = 0; i < env.counts.size(); ++i) {
    double tau = env.delta_um[i] / kSpeedOfLightUmPerPs;
    double expect = mean_scale * (1.0 + std::abs(spectral_coherence(marginal, tau)));
    CHECK(env.counts[i] == doctest::Approx(expect).epsilon(1e-12));
  }
}

TEST_CASE("undersampled carrier is rejected unless envelope-only") {
  auto marginal = sinc_marginal(401, 20.0);
  MichelsonConfig mc;
  mc.scan_min_um = -5.0;
  mc.scan_max_um = 5.0;
  mc.step_um = 0.05;  // 0.1 um of optical path per step > lambda / 8
  auto msg = doctest::Contains("undersamples");
  CHECK_THROWS_WITH_AS(simulate_scan(marginal, mc), msg, std::invalid_argument);
  mc.envelope_only = true;
  CHECK_NOTHROW(simulate_scan(marginal, mc));
}

TEST_CASE("random stream: reproducible, index-separated") {
  RandomStream a(42, 7), b(42, 7), c(42, 8);
  for (int i = 0; i < 100; ++i) {
    auto va = a.next_u64();
    CHECK(va == b.next_u64());
    CHECK(va != c.next_u64());
  }
  RandomStream u(1, 0);
  for (int i = 0; i < 1000; ++i) {
    double x = u.next_unit();
    CHECK(x >= 0.0);
    CHECK(x < 1.0);
  }
  RandomStream p(3, 0);
  CHECK(p.poisson(0.0) == 0);
  CHECK_THROWS_AS(p.poisson(-1.0), std::domain_error);
}

TEST_CASE("poisson sampling statistics, exact and approximate branches") {
  // Small mean: exact product method.
  {
    const double mean = 4.0;
    const int n = 20000;
    double sum = 0.0, sumsq = 0.0;
    for (int i = 0; i < n; ++i) {
      RandomStream s(11, static_cast<std::uint64_t>(i));
      double v = static_cast<double>(s.poisson(mean));
      sum += v;
      sumsq += v * v;
    }
    double m = sum / n;
    double var = sumsq / n - m * m;
    CHECK(m == doctest::Approx(mean).epsilon(0.03));
    CHECK(var / m == doctest::Approx(1.0).epsilon(0.05));
  }
  // Large mean: rounded-normal approximation keeps mean and variance.
  {
    const double mean = 2000.0;
    const int n = 20000;
    double sum = 0.0, sumsq = 0.0;
    for (int i = 0; i < n; ++i) {
      RandomStream s(13, static_cast<std::uint64_t>(i));
      double v = static_cast<double>(s.poisson(mean));
      sum += v;
      sumsq += v * v;
    }
    double m = sum / n;
    double var = sumsq / n - m * m;
    CHECK(m == doctest::Approx(mean).epsilon(0.01));
    CHECK(var / m == doctest::Approx(1.0).epsilon(0.05));
  }
}

TEST_CASE("poisson scans are seed-deterministic") {
  auto marginal = sinc_marginal(401, 20.0);
  MichelsonConfig mc;
  mc.scan_min_um = -10.0;
  mc.scan_max_um = 10.0;
  mc.step_um = 0.025;
  mc.noise = NoiseModel::poisson;
  mc.seed = 77;

  auto first = simulate_scan(marginal, mc);
  auto second = simulate_scan(marginal, mc);
  CHECK(first.counts == second.counts);

  mc.seed = 78;
  auto third = simulate_scan(marginal, mc);
  CHECK(first.counts != third.counts);

  // Counts are integers in this mode.
  for (double v : first.counts) CHECK(v == std::floor(v));
}

TEST_CASE("interferogram CSV roundtrip preserves data and meta") {
  auto marginal = sinc_marginal(401, 20.0);
  MichelsonConfig mc;
  mc.scan_min_um = -20.0;
  mc.scan_max_um = 20.0;
  mc.step_um = 0.025;
  mc.noise = NoiseModel::poisson;
  mc.seed = 5;
  auto gram = simulate_scan(marginal, mc);
  gram.meta.config_hash = "0123456789abcdef";

  auto path = std::filesystem::temp_directory_path() / "pairspec_test_gram.csv";
  gram.write_csv(path);
  auto back = Interferogram::read_csv(path);

  CHECK(back.delta_um == gram.delta_um);  // exact: shortest-roundtrip doubles
  CHECK(back.counts == gram.counts);
  CHECK(back.meta.center_omega == gram.meta.center_omega);
  CHECK(back.meta.label == gram.meta.label);
  CHECK(back.meta.config_hash == gram.meta.config_hash);
  CHECK(back.meta.config.scan_min_um == mc.scan_min_um);
  CHECK(back.meta.config.step_um == mc.step_um);
  CHECK(back.meta.config.noise == NoiseModel::poisson);
  CHECK(back.meta.config.seed == 5);
  CHECK(back.meta.config.path_convention == mc.path_convention);
  CHECK(back.meta.config.envelope_only == mc.envelope_only);
  CHECK(back.meta.config.background_weight == mc.background_weight);
  std::filesystem::remove(path);
}

TEST_CASE("malformed interferogram files are rejected with a location") {
  auto dir = std::filesystem::temp_directory_path();

  auto missing = dir / "pairspec_test_missing_header.csv";
  {
    std::ofstream out(missing);
    out << "# interferogram\n# center_omega_rad_per_ps = 2682.5\ndelta_L_um,counts\n0,1\n0.1,2\n";
  }
  CHECK_THROWS_AS(Interferogram::read_csv(missing), std::runtime_error);
  std::filesystem::remove(missing);

  auto garbled = dir / "pairspec_test_garbled_row.csv";
  {
    auto marginal = sinc_marginal(401, 20.0);
    MichelsonConfig mc;
    mc.scan_min_um = -1.0;
    mc.scan_max_um = 1.0;
    auto gram = simulate_scan(marginal, mc);
    gram.write_csv(garbled);
    std::ofstream out(garbled, std::ios::app);
    out << "not,a number\n";
  }
  CHECK_THROWS_WITH_AS(Interferogram::read_csv(garbled), doctest::Contains("number"),
                       std::runtime_error);
  std::filesystem::remove(garbled);
}
