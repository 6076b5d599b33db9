#ifndef QFCERT_WEIGHTS_HPP
#define QFCERT_WEIGHTS_HPP

#include <cstddef>
#include <vector>

#include "qfcert/errors.hpp"

namespace qfcert {

/// A vector of nonnegative variance weights held in canonical nonincreasing
/// order, together with the permutation back to the caller's input order.
/// The distribution it parametrizes, sum_i w_i xi_i^2 with xi_i ~ N(0,1)
/// independent, is invariant under this reordering.
class WeightVector {
 public:
  // Canonicalizes (stable sort, descending) and validates:
  // entries must be >= 0 and at least one must be > 0.
  static WeightVector from_raw(std::vector<double> raw);

  // Trusts the caller's ordering (identity permutation, no sort). Needed for
  // intermediate balancing states, whose pairing is positional even when a
  // step transiently breaks the descending order.
  static WeightVector from_ordered(std::vector<double> w);

  const std::vector<double>& weights() const { return w_; }
  // perm()[i] = position of canonical entry i in the original input.
  const std::vector<std::size_t>& perm() const { return perm_; }
  std::size_t size() const { return w_.size(); }
  double operator[](std::size_t i) const { return w_[i]; }

  double sum() const;
  double max() const;
  bool strictly_positive() const;

  // Undoes the canonical sort.
  std::vector<double> to_input_order() const;

 private:
  WeightVector(std::vector<double> w, std::vector<std::size_t> perm)
      : w_(std::move(w)), perm_(std::move(perm)) {}

  std::vector<double> w_;
  std::vector<std::size_t> perm_;
};

/// An aligned pair (a, b) of weight vectors, each canonicalized independently
/// and paired positionally, with the derived quantities every certificate
/// rule consumes: f(i) = 1/b_i - 1/a_i, log ratios ln(a_i/b_i) and their
/// prefix/suffix sums, and the argmax positions of f.
///
/// Zero entries are accepted (the CDF oracle must handle degenerate vectors);
/// the cached f / log-ratio values are then infinite and every rule that
/// needs them refuses to run. Indices in the public API are 1-based, matching
/// the usual convention for k_1, k_2, n_1.
class ComparisonInstance {
 public:
  const WeightVector& a() const { return a_; }
  const WeightVector& b() const { return b_; }
  std::size_t size() const { return f_.size(); }

  const std::vector<double>& f() const { return f_; }
  const std::vector<double>& log_ratio() const { return logratio_; }

  // Sum of ln(a_i/b_i) for i in [1, j]; j in [0, n].
  double prefix_sum(std::size_t j) const;
  // Sum of ln(a_i/b_i) for i in [k, n]; k in [1, n+1].
  double suffix_sum(std::size_t k) const;
  double two_ln_d() const { return two_ln_d_; }

  // First/last 1-based index attaining max_i f(i).
  std::size_t argmax_first() const { return argmax_first_; }
  std::size_t argmax_last() const { return argmax_last_; }
  double max_f() const { return f_[argmax_first_ - 1]; }

  bool strictly_positive() const;
  // Throws ZeroWeight unless both vectors are strictly positive.
  void require_strictly_positive(const char* who) const;

  friend ComparisonInstance build_instance(const std::vector<double>& a_raw,
                                           const std::vector<double>& b_raw);
  // Pairs the vectors positionally as given, without re-sorting. For
  // transform states and tests; certificate rules expect canonical order.
  static ComparisonInstance from_canonical(std::vector<double> a,
                                           std::vector<double> b);

 private:
  ComparisonInstance(WeightVector a, WeightVector b);

  WeightVector a_, b_;
  std::vector<double> f_, logratio_;
  std::vector<double> prefix_, suffix_;  // prefix_[j], suffix_[k-1]
  double two_ln_d_ = 0.0;
  std::size_t argmax_first_ = 1, argmax_last_ = 1;
};

ComparisonInstance build_instance(const std::vector<double>& a_raw,
                                  const std::vector<double>& b_raw);

const std::vector<double>& f_values(const ComparisonInstance& inst);

// Suffix sum of ln(a_i/b_i) from k (1-based); k = 1 gives 2 ln D(a, b).
double log_ratio_sums(const ComparisonInstance& inst, std::size_t k);

}  // namespace qfcert

#endif  // QFCERT_WEIGHTS_HPP
