#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <random>

#include "helpers.hpp"
#include "logvort/field.hpp"

using namespace logvort;
using testutil::max_abs_diff;
using testutil::random_band_limited;

TEST_CASE("constant field transforms to a single zero mode of box measure") {
  const GridField one = sample_field(64, 1.0, [](double, double) { return 1.0; });
  const SpectralField F = to_spectral(one);
  CHECK(std::abs(F.at_signed(0, 0) - std::complex<double>(one.measure(), 0.0)) < 1e-9 * one.measure());
  for (int j1 = 0; j1 < F.n; ++j1)
    for (int j2 = 0; j2 < F.n; ++j2) {
      if (j1 == 0 && j2 == 0) continue;
      CHECK(std::abs(F.at(j1, j2)) < 1e-10 * one.measure());
    }
}

TEST_CASE("sin(x1) occupies exactly the (+-1, 0) modes") {
  const GridField f = sample_field(64, 1.0, [](double x1, double) { return std::sin(x1); });
  const SpectralField F = to_spectral(f);
  const double expected = f.measure() / 2.0;  // |a_{+-1}| = 1/2 times the measure
  CHECK(std::abs(std::abs(F.at_signed(1, 0)) - expected) < 1e-9 * expected);
  CHECK(std::abs(std::abs(F.at_signed(-1, 0)) - expected) < 1e-9 * expected);
  double off_mass = 0.0;
  for (int j1 = 0; j1 < F.n; ++j1)
    for (int j2 = 0; j2 < F.n; ++j2) {
      const int s1 = F.signed_index(j1), s2 = F.signed_index(j2);
      if (s2 == 0 && (s1 == 1 || s1 == -1)) continue;
      off_mass = std::max(off_mass, std::abs(F.at(j1, j2)));
    }
  CHECK(off_mass < 1e-10 * expected);
}

TEST_CASE("Parseval holds to 1e-10 on 100 random fields") {
  std::mt19937_64 rng(12345);
  for (int trial = 0; trial < 100; ++trial) {
    const GridField f = random_band_limited(64, 2.0, 20, rng);
    const SpectralField F = to_spectral(f);
    CHECK(testutil::rel_diff(f.l2(), F.l2()) < 1e-10);
  }
}

TEST_CASE("roundtrip to_grid(to_spectral(f)) reproduces f to 1e-12 relative") {
  std::mt19937_64 rng(99);
  const GridField f = random_band_limited(128, 8.0, 40, rng);
  const GridField g = to_grid(to_spectral(f));
  CHECK(max_abs_diff(f, g) < 1e-12 * f.max_abs());
}

TEST_CASE("zero modes invert to the zero field") {
  const GridField z = to_grid(SpectralField::zeros(32, 4.0));
  CHECK(z.max_abs() == 0.0);
}

TEST_CASE("single mode at xi=(0,2) inverts to an a*cos(2 x2) pattern") {
  const double a = 0.7;
  SpectralField F = SpectralField::zeros(64, 1.0);
  F.at_signed(0, 2) = a * F.measure() / 2.0;
  F.at_signed(0, -2) = a * F.measure() / 2.0;
  const GridField g = to_grid(F);
  const GridField expect = sample_field(64, 1.0, [a](double, double x2) { return a * std::cos(2.0 * x2); });
  CHECK(max_abs_diff(g, expect) < 1e-12);
}

TEST_CASE("to_spectral rejects non-finite samples") {
  GridField f = GridField::zeros(16, 1.0);
  f.values[5] = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(to_spectral(f), std::invalid_argument);
}

TEST_CASE("to_grid rejects asymmetric modes") {
  SpectralField F = SpectralField::zeros(16, 1.0);
  F.at_signed(1, 0) = {1.0, 0.0};
  F.at_signed(-1, 0) = {0.5, 0.0};  // breaks conjugate symmetry badly
  CHECK_THROWS_AS(to_grid(F), std::invalid_argument);
}

TEST_CASE("apply_multiplier: identity, unit log weight, and -Laplacian") {
  const GridField f = sample_field(64, 1.0, [](double x1, double) { return std::sin(x1); });
  const SpectralField F = to_spectral(f);

  const GridField id = to_grid(apply_multiplier(F, [](double) { return 1.0; }));
  CHECK(max_abs_diff(id, f) < 1e-13);

  // |xi| = 1 occupied: log2(2)^{1/2} = 1 leaves sin unchanged
  const GridField lw = to_grid(apply_multiplier(F, [](double x) { return std::sqrt(std::log2(x + 1.0)); }));
  CHECK(max_abs_diff(lw, f) < 1e-12);

  const GridField lap = to_grid(apply_multiplier(F, [](double x) { return x * x; }));
  CHECK(max_abs_diff(lap, f) < 1e-12);
}

TEST_CASE("apply_multiplier errors on occupied singular mode, tolerates unoccupied") {
  const GridField f = sample_field(32, 1.0, [](double x1, double) { return std::sin(x1); });
  SpectralField F = to_spectral(f);
  auto inv_sq = [](double x) { return 1.0 / (x * x); };
  CHECK_NOTHROW(apply_multiplier(F, inv_sq));  // mean-zero input: zero mode unoccupied
  F.at_signed(0, 0) = {1.0, 0.0};
  CHECK_THROWS_WITH(apply_multiplier(F, inv_sq), Catch::Matchers::ContainsSubstring("(0, 0)"));
}

TEST_CASE("apply_multiplier is linear") {
  std::mt19937_64 rng(7);
  const SpectralField F = to_spectral(random_band_limited(64, 1.0, 20, rng));
  const SpectralField G = to_spectral(random_band_limited(64, 1.0, 20, rng));
  auto m = [](double x) { return std::pow(x, 1.5) + 0.25; };
  const SpectralField left = apply_multiplier(2.0 * F + (-3.0) * G, m);
  const SpectralField right = 2.0 * apply_multiplier(F, m) + (-3.0) * apply_multiplier(G, m);
  double worst = 0.0;
  for (std::size_t i = 0; i < left.modes.size(); ++i) worst = std::max(worst, std::abs(left.modes[i] - right.modes[i]));
  CHECK(worst < 1e-12 * left.max_abs());
}

TEST_CASE("spectral derivatives: exact on trig fields") {
  const GridField f = sample_field(64, 1.0, [](double x1, double) { return std::sin(x1); });
  const GridField d1 = derivative(f, 0);
  const GridField expect = sample_field(64, 1.0, [](double x1, double) { return std::cos(x1); });
  CHECK(max_abs_diff(d1, expect) < 1e-12);
  CHECK(derivative(f, 1).max_abs() < 1e-13);
}

TEST_CASE("gradient of a Gaussian bump matches central differences at order >= 1.9") {
  auto bump = [](double x1, double x2) { return std::exp(-(x1 * x1 + x2 * x2) / 0.18); };
  double prev_err = 0.0;
  std::vector<double> errs;
  for (int n : {64, 128}) {
    const GridField f = sample_field(n, 1.0, bump);
    const auto [g1, g2] = gradient(f);
    // central finite-difference oracle
    double err = 0.0;
    const double h = f.dx();
    for (int i1 = 0; i1 < n; ++i1)
      for (int i2 = 0; i2 < n; ++i2) {
        const int ip = (i1 + 1) % n, im = (i1 + n - 1) % n;
        const double fd = (f.at(ip, i2) - f.at(im, i2)) / (2.0 * h);
        err = std::max(err, std::abs(fd - g1.at(i1, i2)));
      }
    errs.push_back(err);
    prev_err = err;
  }
  const double order = std::log2(errs[0] / errs[1]);
  CHECK(order >= 1.9);  // FD error is O(h^2); the spectral side is exact
}

TEST_CASE("dealias keeps the floor(n/3) block, is idempotent, and fixes band-limited fields") {
  const int n = 64;
  std::mt19937_64 rng(21);
  SpectralField noise = SpectralField::zeros(n, 1.0);
  std::normal_distribution<double> gauss;
  for (auto& c : noise.modes) c = {gauss(rng), gauss(rng)};

  const SpectralField cut = dealias(noise);
  const int keep = n / 3;
  int retained = 0;
  for (int j1 = 0; j1 < n; ++j1)
    for (int j2 = 0; j2 < n; ++j2) {
      const int a = std::max(std::abs(cut.signed_index(j1)), std::abs(cut.signed_index(j2)));
      if (std::abs(cut.at(j1, j2)) > 0.0) {
        ++retained;
        CHECK(3 * a <= n);
      }
    }
  CHECK(retained == (2 * keep + 1) * (2 * keep + 1));

  const SpectralField twice = dealias(cut);
  for (std::size_t i = 0; i < cut.modes.size(); ++i) REQUIRE(twice.modes[i] == cut.modes[i]);

  const GridField f = random_band_limited(n, 1.0, n / 4, rng);
  const SpectralField F = to_spectral(f);
  const SpectralField Fd = dealias(F);
  double worst = 0.0;
  for (std::size_t i = 0; i < F.modes.size(); ++i) worst = std::max(worst, std::abs(F.modes[i] - Fd.modes[i]));
  CHECK(worst < 1e-12 * F.max_abs());
}

TEST_CASE("derivative commutes with radial multipliers") {
  std::mt19937_64 rng(3);
  const SpectralField F = to_spectral(random_band_limited(64, 2.0, 20, rng));
  auto m = [](double x) { return std::log2(x + 1.0); };
  const SpectralField a = derivative(apply_multiplier(F, m), 0);
  const SpectralField b = apply_multiplier(derivative(F, 0), m);
  double worst = 0.0;
  for (std::size_t i = 0; i < a.modes.size(); ++i) worst = std::max(worst, std::abs(a.modes[i] - b.modes[i]));
  CHECK(worst < 1e-10 * a.max_abs());
}

TEST_CASE("LGV1 snapshots roundtrip bit-exactly") {
  std::mt19937_64 rng(31);
  GridField f = random_band_limited(32, 4.0, 10, rng);
  f.time = 0.625;
  const std::string path = "test_snapshot.lgv1";
  save_lgv1(path, f);
  const GridField g = load_lgv1(path);
  REQUIRE(g.n == f.n);
  REQUIRE(g.box == f.box);
  REQUIRE(g.time == f.time);
  REQUIRE(g.values == f.values);
  std::remove(path.c_str());
}
