#ifndef QFCERT_CDF_HPP
#define QFCERT_CDF_HPP

#include <cstdint>
#include <vector>

#include "qfcert/errors.hpp"
#include "qfcert/weights.hpp"

namespace qfcert {

enum class Method { Inversion, MonteCarlo };

/// One evaluation of beta(x, w) = P(sum_i w_i xi_i^2 < x) with an error bound:
/// absolute truncation + quadrature bound for inversion, k_sigma standard
/// errors for Monte Carlo.
struct CdfEstimate {
  double value = 0.0;
  double error_bound = 0.0;
  Method method = Method::Inversion;
  double x = 0.0;
  long long n_samples = 0;   // Monte Carlo only
  std::uint64_t seed = 0;    // Monte Carlo only
  int k_sigma = 0;           // Monte Carlo only
};

// Raised when the inversion cannot certify the requested tolerance; carries
// the best estimate achieved.
struct ToleranceUnreachable : Error {
  ToleranceUnreachable(const std::string& msg, CdfEstimate best_estimate)
      : Error(msg), best(best_estimate) {}
  CdfEstimate best;
};

/// Characteristic-function inversion of the weighted chi-square CDF
/// (Imhof 1961). Zero weights are dropped; x <= 0 returns 0 exactly.
/// tol must lie in (1e-12, 1e-2); the returned error_bound is <= tol.
CdfEstimate beta_cdf_inversion(const WeightVector& w, double x, double tol);

/// Monte Carlo estimate with deterministic, chunked sub-streams: the sample
/// stream is keyed by (seed, chunk index) alone, so chunks can be evaluated
/// in any order (or concurrently) and merged exactly. error_bound is
/// 3 sqrt(p(1-p)/N). Requires n_samples >= 1000.
CdfEstimate beta_cdf_mc(const WeightVector& w, double x, long long n_samples,
                        std::uint64_t seed);

/// Same sample stream evaluated against many thresholds at once; results are
/// returned in the order of xs and are bitwise identical to per-x calls of
/// beta_cdf_mc with the same seed.
std::vector<CdfEstimate> beta_cdf_mc_batch(const WeightVector& w,
                                           const std::vector<double>& xs,
                                           long long n_samples,
                                           std::uint64_t seed);

enum class Order { OrderedAB, OrderedBA, Indistinguishable };

struct CompareOptions {
  Method method = Method::Inversion;
  double tol = 1e-8;            // inversion
  long long n_samples = 200000; // Monte Carlo
  std::uint64_t seed = 20240901;
};

struct CompareResult {
  Order verdict = Order::Indistinguishable;
  CdfEstimate beta_a, beta_b;
};

/// Numerically compares beta(x, a) against beta(x, b): OrderedAB iff the two
/// error intervals separate with beta_a below, OrderedBA mirrored,
/// Indistinguishable when they overlap. Requires x > 0.
CompareResult compare_at(const WeightVector& a, const WeightVector& b, double x,
                         const CompareOptions& opts = {});

}  // namespace qfcert

#endif  // QFCERT_CDF_HPP
