#include <doctest.h>

#include <cmath>

#include "qfcert/cdf.hpp"
#include "qfcert/sampling.hpp"
#include "test_oracles.hpp"

using namespace qfcert;
using qfcert_test::chi2_cdf;

namespace {
WeightVector wv(std::vector<double> v) { return WeightVector::from_raw(std::move(v)); }
}  // namespace

TEST_CASE("inversion matches closed-form chi-square cases") {
  const double tol = 1e-9;
  SUBCASE("chi2_2 at 2") {
    const auto e = beta_cdf_inversion(wv({1.0, 1.0}), 2.0, tol);
    CHECK(e.value == doctest::Approx(1.0 - std::exp(-1.0)).epsilon(1e-8));
    CHECK(e.error_bound <= tol);
  }
  SUBCASE("zero weights dropped: chi2_1 at 1") {
    const auto e = beta_cdf_inversion(wv({1.0, 0.0, 0.0}), 1.0, tol);
    CHECK(e.value == doctest::Approx(0.682689492137086).epsilon(1e-10));
  }
  SUBCASE("scaled exponential at 5") {
    const auto e = beta_cdf_inversion(wv({0.5, 0.5}), 5.0, tol);
    CHECK(e.value == doctest::Approx(1.0 - std::exp(-5.0)).epsilon(1e-8));
  }
  SUBCASE("x <= 0 is exactly zero") {
    CHECK(beta_cdf_inversion(wv({4.0, 1.0}), 0.0, tol).value == 0.0);
    CHECK(beta_cdf_inversion(wv({4.0, 1.0}), -1.0, tol).value == 0.0);
  }
  SUBCASE("tolerance domain is validated") {
    CHECK_THROWS_AS(beta_cdf_inversion(wv({1.0}), 1.0, 1e-13), Error);
    CHECK_THROWS_AS(beta_cdf_inversion(wv({1.0}), 1.0, 0.5), Error);
  }
}

TEST_CASE("inversion agrees with the incomplete-gamma oracle on equal weights") {
  for (std::size_t n : {1, 2, 3, 5, 8}) {
    const WeightVector w = wv(std::vector<double>(n, 1.0));
    for (double x : {0.2, 1.0, 2.5, 1.0 * n, 2.9 * n}) {
      const auto e = beta_cdf_inversion(w, x, 1e-9);
      CHECK(std::fabs(e.value - chi2_cdf(double(n), x)) <= 2e-9);
    }
  }
}

TEST_CASE("inversion scaling and monotonicity properties") {
  const double tol = 1e-8;
  for (int rep = 0; rep < 10; ++rep) {
    const auto raw = log_uniform_weights(4, mix64(5000, rep));
    const WeightVector w = wv(raw);
    const double x = 0.3 + 0.9 * rep;

    // beta(c w, c x) = beta(w, x)
    const double c = 0.25 + 0.5 * rep;
    std::vector<double> scaled = raw;
    for (auto& v : scaled) v *= c;
    const auto e1 = beta_cdf_inversion(w, x, tol);
    const auto e2 = beta_cdf_inversion(wv(scaled), c * x, tol);
    CHECK(std::fabs(e1.value - e2.value) <= 2 * tol);

    // monotone in x
    const auto lo = beta_cdf_inversion(w, x, tol);
    const auto hi = beta_cdf_inversion(w, x * 1.5, tol);
    CHECK(lo.value <= hi.value + 2 * tol);
  }
}

TEST_CASE("componentwise dominance lowers the CDF") {
  for (int rep = 0; rep < 8; ++rep) {
    auto base = log_uniform_weights(5, mix64(6000, rep));
    auto larger = base;
    std::mt19937_64 eng(mix64(6001, rep));
    for (auto& v : larger) v *= 1.0 + uniform01(eng);
    const double x = 0.5 + rep;
    const auto ea = beta_cdf_inversion(wv(larger), x, 1e-8);
    const auto eb = beta_cdf_inversion(wv(base), x, 1e-8);
    CHECK(ea.value <= eb.value + 2e-8);
  }
}

TEST_CASE("monte carlo: fixtures, determinism, chunk independence") {
  const WeightVector w = wv({1.0, 1.0});
  SUBCASE("matches the analytic value within its own error bound") {
    const auto e = beta_cdf_mc(w, 2.0, 1000000, 7);
    CHECK(e.error_bound == doctest::Approx(0.00145).epsilon(0.1));
    CHECK(std::fabs(e.value - (1.0 - std::exp(-1.0))) <= 1.5 * e.error_bound);
  }
  SUBCASE("x = 0 is exact") {
    const auto e = beta_cdf_mc(wv({4.0, 1.0}), 0.0, 10000, 1);
    CHECK(e.value == 0.0);
    CHECK(e.error_bound == 0.0);
  }
  SUBCASE("same seed, same value") {
    const auto e1 = beta_cdf_mc(w, 2.0, 50000, 123);
    const auto e2 = beta_cdf_mc(w, 2.0, 50000, 123);
    CHECK(e1.value == e2.value);
  }
  SUBCASE("scaled exponential fixture") {
    const auto e = beta_cdf_mc(wv({0.5, 0.5}), 5.0, 1000000, 7);
    CHECK(e.error_bound <= 0.0004);
    CHECK(std::fabs(e.value - (1.0 - std::exp(-5.0))) <= 1.5 * e.error_bound);
  }
  SUBCASE("batched thresholds replicate single-x calls") {
    const std::vector<double> xs = {3.0, 0.5, 2.0, 0.5001};
    const auto batch = beta_cdf_mc_batch(w, xs, 50000, 99);
    for (std::size_t i = 0; i < xs.size(); ++i) {
      const auto single = beta_cdf_mc(w, xs[i], 50000, 99);
      CHECK(batch[i].value == single.value);
      CHECK(batch[i].x == xs[i]);
    }
  }
  SUBCASE("n_samples floor") {
    CHECK_THROWS_AS(beta_cdf_mc(w, 1.0, 999, 1), Error);
  }
}

TEST_CASE("inversion and monte carlo agree on random instances") {
  for (int rep = 0; rep < 6; ++rep) {
    const auto raw = log_uniform_weights(3 + rep % 4, mix64(7000, rep));
    const WeightVector w = wv(raw);
    const double x = 0.5 * w.sum() * (0.4 + 0.4 * rep);
    const auto inv = beta_cdf_inversion(w, x, 1e-8);
    const auto mc = beta_cdf_mc(w, x, 200000, mix64(7100, rep));
    CHECK(std::fabs(inv.value - mc.value) <= inv.error_bound + mc.error_bound);
  }
}

TEST_CASE("compare_at fixtures") {
  SUBCASE("dominant pair orders AB for small x") {
    const auto r = compare_at(wv({4.0, 1.0}), wv({1.0, 1.0}), 1.0);
    CHECK(r.verdict == Order::OrderedAB);
  }
  SUBCASE("equal vectors are indistinguishable") {
    const auto r = compare_at(wv({1.0, 1.0}), wv({1.0, 1.0}), 2.0);
    CHECK(r.verdict == Order::Indistinguishable);
  }
  SUBCASE("max-condition failure reverses at large x") {
    const auto r = compare_at(wv({0.5, 0.5}), wv({1.0, 0.0}), 5.0);
    CHECK(r.verdict == Order::OrderedBA);
    CHECK(r.beta_a.value == doctest::Approx(0.993262).epsilon(1e-6));
    CHECK(r.beta_b.value == doctest::Approx(0.974653).epsilon(1e-6));
  }
  SUBCASE("x must be positive") {
    CHECK_THROWS_AS(compare_at(wv({1.0}), wv({1.0}), 0.0), Error);
  }
}
