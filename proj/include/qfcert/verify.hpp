#ifndef QFCERT_VERIFY_HPP
#define QFCERT_VERIFY_HPP

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "qfcert/certificates.hpp"

namespace qfcert {

/// Randomized soundness campaign: draw instance pairs, run every rule, and
/// test each applicable certificate against the Monte Carlo oracle at
/// sampled in-region x values. Any violation is an implementation bug.
struct VerifyOptions {
  long long trials = 200;
  std::size_t n_max = 6;      // per-trial dimension drawn uniformly in [2, n_max]
  std::uint64_t seed = 42;
  long long samples = 200000;
  int x_per_certificate = 10;
  double sigmas = 4.0;        // violation margin in standard errors per side
};

struct RuleTally {
  long long certificates = 0;
  long long checks = 0;
  long long violations = 0;
};

struct VerifySummary {
  VerifyOptions opts;
  std::map<std::string, RuleTally> by_rule;
  long long trials = 0;
  long long total_certificates = 0;
  long long total_checks = 0;
  long long total_violations = 0;
  std::vector<std::string> violation_lines;
};

VerifySummary run_verification(const VerifyOptions& opts);

// Deterministic rendering: identical options and seed give byte-identical text.
std::string render_summary(const VerifySummary& s);

// In-region sample points used by the campaign (exposed for tests):
// all-x regions are probed log-spaced over [0.1 sum_b, 10 sum_b].
std::vector<double> region_sample_points(const Region& region, double sum_b,
                                         int count);

}  // namespace qfcert

#endif  // QFCERT_VERIFY_HPP
