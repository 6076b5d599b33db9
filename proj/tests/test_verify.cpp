#include <doctest.h>

#include "qfcert/verify.hpp"

using namespace qfcert;

TEST_CASE("region sample points stay inside their regions") {
  const double sum_b = 4.0;
  for (const Region r : {Region{Region::Kind::AllX, 0.0},
                         Region{Region::Kind::AtMost, 2.5},
                         Region{Region::Kind::AtLeast, 7.0}}) {
    const auto xs = region_sample_points(r, sum_b, 10);
    REQUIRE(xs.size() == 10);
    for (double x : xs) {
      CHECK(x > 0.0);
      CHECK(r.contains(x));
    }
  }
}

TEST_CASE("small campaign runs clean and is deterministic") {
  VerifyOptions opts;
  opts.trials = 12;
  opts.n_max = 4;
  opts.seed = 7;
  opts.samples = 20000;
  const VerifySummary s1 = run_verification(opts);
  CHECK(s1.total_violations == 0);
  CHECK(s1.total_certificates > 0);
  CHECK(s1.total_checks >= s1.total_certificates);

  const VerifySummary s2 = run_verification(opts);
  CHECK(render_summary(s1) == render_summary(s2));

  opts.seed = 8;
  const VerifySummary s3 = run_verification(opts);
  CHECK(render_summary(s1) != render_summary(s3));
}
