#include <doctest.h>

#include <cmath>

#include "qfcert/cdf.hpp"
#include "qfcert/certificates.hpp"
#include "qfcert/sampling.hpp"
#include "qfcert/transforms.hpp"
#include "test_oracles.hpp"

using namespace qfcert;
using qfcert_test::iterate_balance_limit;
using qfcert_test::random_instance;

namespace {
const ComparisonInstance kF1 = build_instance({4.0, 1.0}, {1.0, 1.0});
const ComparisonInstance kF2 = build_instance({1.0, 1.0, 1.0}, {1.2, 0.5, 0.4});
}  // namespace

TEST_CASE("balance_pair fixtures") {
  SUBCASE("side A equalizes (4,1) against unit b to (2,2)") {
    const auto res = balance_pair(kF1, 1, Side::A);
    CHECK(res.vec[0] == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(res.vec[1] == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(res.step.f_equalized == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(res.step.z == doctest::Approx(-3.0).epsilon(1e-12));
  }
  SUBCASE("side B matches the printed closed form") {
    const auto res = balance_pair(kF1, 1, Side::B);
    const double z = 4.0 * (1.0 / 4.0 - 1.0);
    const double p = 1.0 / 4.0 + 1.0;
    const double f_closed = 0.5 * (std::sqrt(p * p - z) - p);
    CHECK(res.step.f_equalized == doctest::Approx(f_closed).epsilon(1e-14));
    CHECK(res.step.f_equalized ==
          doctest::Approx((std::sqrt(73.0) - 5.0) / 8.0).epsilon(1e-13));
    CHECK(res.vec[0] == doctest::Approx(1.443000468).epsilon(1e-8));
    CHECK(res.vec[1] == doctest::Approx(0.693000468).epsilon(1e-8));
    CHECK(res.vec[0] * res.vec[1] == doctest::Approx(1.0).epsilon(1e-12));
  }
  SUBCASE("constant f admits no step") {
    const auto inst = build_instance({1.0, 1.0}, {1.0, 1.0});
    CHECK_THROWS_AS(balance_pair(inst, 1, Side::A), NotApplicableStep);
  }
}

TEST_CASE("balance_pair step properties on random instances") {
  for (int rep = 0; rep < 60; ++rep) {
    const auto inst = random_instance(2 + rep % 6, mix64(515, rep));
    const auto& f = inst.f();
    for (std::size_t i = 1; i < inst.size(); ++i) {
      if (!(f[i] < f[i - 1])) continue;
      for (Side side : {Side::A, Side::B}) {
        const auto res = balance_pair(inst, i, side);
        const auto& before = side == Side::A ? inst.a() : inst.b();
        // product preserved, monotone pair, f strictly between the old values
        CHECK(res.vec[i - 1] * res.vec[i] ==
              doctest::Approx(before[i - 1] * before[i]).epsilon(1e-12));
        CHECK(res.vec[i - 1] >= res.vec[i]);
        CHECK(res.step.f_equalized > f[i]);
        CHECK(res.step.f_equalized < f[i - 1]);
      }
    }
  }
}

TEST_CASE("balance_limit fixtures") {
  SUBCASE("side A limit of (4,1) is (2,2)") {
    const auto tr = balance_limit(kF1, Side::A);
    CHECK(tr.k_star == 1);
    CHECK(tr.limit[0] == doctest::Approx(2.0).epsilon(1e-11));
    CHECK(tr.limit[1] == doctest::Approx(2.0).epsilon(1e-11));
    REQUIRE(tr.segments.size() == 1);
    CHECK(tr.segments[0].root_value == doctest::Approx(0.5).epsilon(1e-11));
  }
  SUBCASE("side B limit of (4,1)") {
    const auto tr = balance_limit(kF1, Side::B);
    CHECK(tr.k_star == 1);
    CHECK(tr.limit[0] == doctest::Approx(1.443000468).epsilon(1e-8));
    CHECK(tr.limit[1] == doctest::Approx(0.693000468).epsilon(1e-8));
    CHECK(tr.limit[0] * tr.limit[1] == doctest::Approx(1.0).epsilon(1e-10));
  }
  SUBCASE("identity instance is its own limit") {
    const auto inst = build_instance({2.0, 1.0}, {2.0, 1.0});
    const auto tr = balance_limit(inst, Side::A);
    CHECK(tr.limit[0] == doctest::Approx(2.0).epsilon(1e-11));
    CHECK(tr.limit[1] == doctest::Approx(1.0).epsilon(1e-11));
  }
  SUBCASE("increasing f (example 2) is left untouched") {
    const auto tr = balance_limit(kF2, Side::A);
    for (std::size_t i = 0; i < 3; ++i)
      CHECK(tr.limit[i] == doctest::Approx(1.0).epsilon(1e-11));
    CHECK(tr.k_star == 3);
  }
}

TEST_CASE("balance_limit properties on random instances") {
  for (int rep = 0; rep < 50; ++rep) {
    const auto inst = random_instance(2 + rep % 7, mix64(616, rep));
    for (Side side : {Side::A, Side::B}) {
      const auto tr = balance_limit(inst, side);
      const ComparisonInstance lim =
          side == Side::A
              ? ComparisonInstance::from_canonical(tr.limit,
                                                   inst.b().weights())
              : ComparisonInstance::from_canonical(inst.a().weights(),
                                                   tr.limit);
      const auto& f = lim.f();
      // piecewise-constant nondecreasing f, with the flat suffix level equal
      // to the defining root
      for (std::size_t i = 0; i + 1 < f.size(); ++i)
        CHECK(f[i] <= f[i + 1] + 1e-9 * (1.0 + std::fabs(f[i])));
      for (const auto& seg : tr.segments) {
        CHECK(seg.product_after ==
              doctest::Approx(seg.product_before).epsilon(1e-9));
        for (std::size_t i = seg.lo; i <= seg.hi; ++i)
          CHECK(f[i - 1] ==
                doctest::Approx(seg.root_value)
                    .epsilon(1e-9));
      }
      // the flat suffix level is the root of its own limit equation
      CHECK(tr.segments.back().lo == tr.k_star);
      const auto root = side == Side::A ? t_root(inst, tr.k_star)
                                        : d_root(inst, tr.k_star);
      CHECK(f[inst.size() - 1] ==
            doctest::Approx(root.value).epsilon(1e-9));
    }
  }
}

TEST_CASE("k1/k2 mark the dominant suffix root") {
  // soundness kernel for the theorem-1 denominators: the flat level at k1
  // (resp. k2) dominates every suffix root, in particular f(n), so the
  // flattened vector's largest f equals that level
  for (int rep = 0; rep < 300; ++rep) {
    const auto inst = random_instance(2 + rep % 8, mix64(717171, rep));
    const std::size_t n = inst.size();
    const std::size_t k1 = k1_index(inst);
    const double t = t_root(inst, k1).value;
    const std::size_t k2 = k2_index(inst);
    const double d = d_root(inst, k2).value;
    for (std::size_t m = 1; m <= n; ++m) {
      CHECK(t_root(inst, m).value <= t + 1e-9 * (1.0 + std::fabs(t)));
      CHECK(d_root(inst, m).value <= d + 1e-9 * (1.0 + std::fabs(d)));
    }
    CHECK(t >= inst.f()[n - 1] - 1e-9 * (1.0 + std::fabs(t)));
    // the indices are the suffix-block starts of the balancing limits
    CHECK(k1 == balance_limit(inst, Side::A).k_star);
    CHECK(k2 == balance_limit(inst, Side::B).k_star);
  }
}

TEST_CASE("iterating balance_pair reproduces the closed-form limit") {
  for (int rep = 0; rep < 30; ++rep) {
    const auto inst = random_instance(2 + rep % 6, mix64(717, rep));
    for (Side side : {Side::A, Side::B}) {
      const auto tr = balance_limit(inst, side);
      const auto iterated = iterate_balance_limit(inst, side);
      for (std::size_t i = 0; i < inst.size(); ++i)
        CHECK(iterated[i] ==
              doctest::Approx(tr.limit[i]).epsilon(1e-8));
    }
  }
}

TEST_CASE("balancing steps move beta in the guaranteed direction") {
  // beta(x, a) <= beta(x, a') after a side-A step; side B reversed.
  for (int rep = 0; rep < 5; ++rep) {
    const auto inst = random_instance(3 + rep, mix64(818, rep));
    const auto& f = inst.f();
    std::size_t i = 0;
    for (std::size_t j = 1; j < inst.size(); ++j)
      if (f[j] < f[j - 1]) {
        i = j;
        break;
      }
    if (i == 0) continue;
    for (Side side : {Side::A, Side::B}) {
      const auto res = balance_pair(inst, i, side);
      const auto& before =
          side == Side::A ? inst.a().weights() : inst.b().weights();
      const WeightVector wb = WeightVector::from_raw(before);
      const WeightVector wa = WeightVector::from_raw(res.vec);
      const double scale = wb.sum();
      for (double frac : {0.3, 0.7, 1.2, 1.8, 2.5}) {
        const double x = frac * scale;
        const auto eb = beta_cdf_inversion(wb, x, 1e-7);
        const auto ea = beta_cdf_inversion(wa, x, 1e-7);
        if (side == Side::A)
          CHECK(eb.value <= ea.value + 3e-7);
        else
          CHECK(ea.value <= eb.value + 3e-7);
      }
    }
  }
}

TEST_CASE("limits move beta in the guaranteed direction") {
  // side A raises the CDF pointwise, side B lowers it
  for (int rep = 0; rep < 6; ++rep) {
    const auto inst = random_instance(2 + rep, mix64(202020, rep));
    for (Side side : {Side::A, Side::B}) {
      const auto tr = balance_limit(inst, side);
      const auto& orig =
          side == Side::A ? inst.a().weights() : inst.b().weights();
      const WeightVector w_orig = WeightVector::from_raw(orig);
      const WeightVector w_lim = WeightVector::from_raw(tr.limit);
      for (double frac : {0.4, 1.0, 2.2}) {
        const double x = frac * w_orig.sum();
        const auto e_orig = beta_cdf_inversion(w_orig, x, 1e-7);
        const auto e_lim = beta_cdf_inversion(w_lim, x, 1e-7);
        if (side == Side::A)
          CHECK(e_orig.value <= e_lim.value + 3e-7);
        else
          CHECK(e_lim.value <= e_orig.value + 3e-7);
      }
    }
  }
}

TEST_CASE("reorder_for_increasing_f") {
  SUBCASE("example 2 ordering is found") {
    const auto inst = reorder_for_increasing_f({1.0, 1.0, 1.0}, {0.4, 1.2, 0.5});
    REQUIRE(inst.has_value());
    CHECK(inst->b().weights() == std::vector<double>{1.2, 0.5, 0.4});
    CHECK(inst->f()[0] < inst->f()[1]);
    CHECK(inst->f()[1] < inst->f()[2]);
  }
  SUBCASE("identical vectors trivially qualify") {
    CHECK(reorder_for_increasing_f({2.0, 1.0}, {1.0, 2.0}).has_value());
  }
  SUBCASE("decreasing f is rejected") {
    CHECK_FALSE(reorder_for_increasing_f({4.0, 1.0}, {1.0, 1.0}).has_value());
  }
}

TEST_CASE("theorem2_chain fixtures") {
  SUBCASE("example 2 chain: one step, then the prefix sum blocks") {
    const auto tr = theorem2_chain(kF2);
    REQUIRE(tr.applicable);
    REQUIRE(tr.steps.size() == 1);
    CHECK(tr.steps[0].flat_start == 3);
    CHECK(tr.steps[0].epsilon == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(tr.steps[0].b_after[2] == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(tr.n1 == 2);
    CHECK(tr.d == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(tr.g == doctest::Approx(1.203973).epsilon(1e-6));
  }
  SUBCASE("constant f: empty chain, n1 = 1") {
    const auto tr = theorem2_chain(build_instance({2.0, 2.0}, {1.0, 1.0}));
    CHECK(tr.applicable);
    CHECK(tr.steps.empty());
    CHECK(tr.n1 == 1);
  }
  SUBCASE("constant f at level one") {
    const auto tr = theorem2_chain(build_instance({1.0, 1.0}, {0.5, 0.5}));
    CHECK(tr.applicable);
    CHECK(tr.steps.empty());
    CHECK(tr.d == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(tr.g == doctest::Approx(2.0 * std::log(2.0)).epsilon(1e-12));
  }
  SUBCASE("decreasing f is not chainable") {
    CHECK_FALSE(theorem2_chain(kF1).applicable);
  }
}

TEST_CASE("theorem2_chain properties") {
  int exercised = 0;
  for (int rep = 0; rep < 400; ++rep) {
    const auto inst = random_instance(2 + rep % 6, mix64(919, rep));
    const auto& f = inst.f();
    bool nondecr = true;
    for (std::size_t i = 0; i + 1 < f.size(); ++i)
      if (f[i] > f[i + 1]) nondecr = false;
    if (!nondecr) continue;
    const auto tr = theorem2_chain(inst);
    REQUIRE(tr.applicable);
    // b' >= b componentwise and G never decreases along the chain
    for (std::size_t i = 0; i < inst.size(); ++i)
      CHECK(tr.b_final[i] >= inst.b()[i] * (1.0 - 1e-12));
    double prev_g = -1e300;
    for (const auto& step : tr.steps) {
      if (std::isnan(step.g_after)) continue;
      CHECK(step.g_after >= prev_g - 1e-9);
      prev_g = step.g_after;
    }
    // final (d, G) reproduce the theorem-2 certificate when it applies
    const auto cert = theorem2(inst);
    if (cert.applicable && cert.region->kind == Region::Kind::AtMost) {
      ++exercised;
      CHECK(tr.n1 == static_cast<std::size_t>(cert.witness.at("n1")));
      CHECK(tr.d == doctest::Approx(cert.witness.at("d")).epsilon(1e-10));
      CHECK(tr.g == doctest::Approx(cert.region->x_star).epsilon(1e-9));
    }
  }
  CHECK(exercised > 3);
}
