#include <doctest.h>

#include <cmath>

#include "qfcert/roots.hpp"
#include "qfcert/sampling.hpp"
#include "test_oracles.hpp"

using namespace qfcert;
using qfcert_test::random_instance;

TEST_CASE("t_root closed forms") {
  SUBCASE("ln 4 + 2 ln(1 - T) = 0 gives T = 1/2") {
    const auto inst = build_instance({4.0, 1.0}, {1.0, 1.0});
    const auto r = t_root(inst, 1);
    CHECK(r.value == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(r.residual <= 1e-10 * (1.0 + inst.suffix_sum(1)));
  }
  SUBCASE("identical vectors give T = 0") {
    const auto inst = build_instance({2.0, 2.0}, {2.0, 2.0});
    CHECK(t_root(inst, 1).value == 0.0);
  }
  SUBCASE("single-element suffix solves exactly") {
    const auto inst = build_instance({1.0, 1.0, 1.0}, {1.2, 0.5, 0.4});
    CHECK(t_root(inst, 3).value == doctest::Approx(1.5).epsilon(1e-12));
    // intermediate root: (1 - 0.5 T)(1 - 0.4 T) = 0.2
    CHECK(t_root(inst, 2).value == doctest::Approx(1.2192235936).epsilon(1e-9));
  }
}

TEST_CASE("d_root closed forms") {
  SUBCASE("(1 + 4D)(1 + D) = 4 gives D = (sqrt(73) - 5)/8") {
    const auto inst = build_instance({4.0, 1.0}, {1.0, 1.0});
    CHECK(d_root(inst, 1).value ==
          doctest::Approx((std::sqrt(73.0) - 5.0) / 8.0).epsilon(1e-11));
  }
  SUBCASE("identical vectors give D = 0") {
    const auto inst = build_instance({3.0, 1.0}, {3.0, 1.0});
    CHECK(d_root(inst, 1).value == 0.0);
  }
  SUBCASE("ln 2 = ln(1 + 2D) gives D = 1/2") {
    const auto inst = build_instance({2.0, 2.0}, {1.0, 1.0});
    CHECK(d_root(inst, 2).value == doctest::Approx(0.5).epsilon(1e-12));
  }
}

TEST_CASE("root contracts on random instances") {
  for (int rep = 0; rep < 100; ++rep) {
    const auto inst = random_instance(2 + rep % 7, mix64(31337, rep));
    const std::size_t n = inst.size();
    for (std::size_t k = 1; k <= n; ++k) {
      const double s = inst.suffix_sum(k);
      const auto t = t_root(inst, k);
      const auto d = d_root(inst, k);
      // residual and sign contracts
      CHECK(t.residual <= 1e-10 * (1.0 + std::fabs(s)));
      CHECK(d.residual <= 1e-10 * (1.0 + std::fabs(s)));
      if (s > 0.0) {
        CHECK(t.value > 0.0);
        CHECK(d.value > 0.0);
      } else if (s < 0.0) {
        CHECK(t.value < 0.0);
        CHECK(d.value < 0.0);
      }
      // the roots live strictly inside their domains
      CHECK(t.value < 1.0 / inst.b()[k - 1]);
      CHECK(d.value > -1.0 / inst.a()[k - 1]);
      // Jensen bounds bracket the roots
      const auto jb = jensen_bounds(inst, k);
      CHECK(t.value <= jb.t_upper_tight + 1e-9 * (1.0 + std::fabs(jb.t_upper_tight)));
      CHECK(jb.t_upper_tight <=
            jb.t_upper_loose + 1e-12 * (1.0 + std::fabs(jb.t_upper_loose)));
      CHECK(d.value >= jb.d_lower - 1e-9 * (1.0 + std::fabs(jb.d_lower)));
    }
    // both roots coincide with f(n) at the last index
    const auto tn = t_root(inst, n);
    const auto dn = d_root(inst, n);
    CHECK(tn.value == doctest::Approx(inst.f()[n - 1]).epsilon(1e-10));
    CHECK(dn.value == doctest::Approx(inst.f()[n - 1]).epsilon(1e-10));
  }
}

TEST_CASE("jensen bounds fixtures") {
  const auto inst = build_instance({4.0, 1.0}, {1.0, 1.0});
  const auto jb = jensen_bounds(inst, 1);
  CHECK(jb.t_upper_tight == doctest::Approx(0.5).epsilon(1e-12));  // tight here
  CHECK(jb.d_lower == doctest::Approx(std::log(4.0) / 5.0).epsilon(1e-12));

  const auto same = build_instance({1.0, 2.0}, {2.0, 1.0});
  const auto jb0 = jensen_bounds(same, 1);
  CHECK(jb0.t_upper_tight == doctest::Approx(0.0));
  CHECK(jb0.d_lower == doctest::Approx(0.0));
  CHECK_THROWS_AS(jensen_bounds(inst, 3), IndexOutOfRange);
}

TEST_CASE("example 1 reduction: b all-ones gives T(1) = 1 - D^{-2/n}") {
  for (int rep = 0; rep < 40; ++rep) {
    const std::size_t n = 2 + rep % 9;
    auto a = log_uniform_weights(n, mix64(424242, rep));
    const ComparisonInstance inst =
        build_instance(a, std::vector<double>(n, 1.0));
    if (inst.two_ln_d() <= 0.0) continue;
    const double closed = -std::expm1(-inst.two_ln_d() / double(n));
    CHECK(t_root(inst, 1).value == doctest::Approx(closed).epsilon(1e-10));
  }
}
