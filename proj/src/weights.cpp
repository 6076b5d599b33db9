#include "qfcert/weights.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace qfcert {

WeightVector WeightVector::from_raw(std::vector<double> raw) {
  if (raw.empty()) throw LengthMismatch("weight vector must be nonempty");
  bool any_positive = false;
  for (double w : raw) {
    if (std::isnan(w) || w < 0.0) throw NegativeWeight("weights must be >= 0");
    if (w > 0.0) any_positive = true;
  }
  if (!any_positive) throw AllZeroWeight("at least one weight must be > 0");

  std::vector<std::size_t> order(raw.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t i, std::size_t j) { return raw[i] > raw[j]; });

  std::vector<double> sorted(raw.size());
  for (std::size_t i = 0; i < order.size(); ++i) sorted[i] = raw[order[i]];
  return WeightVector(std::move(sorted), std::move(order));
}

WeightVector WeightVector::from_ordered(std::vector<double> w) {
  if (w.empty()) throw LengthMismatch("weight vector must be nonempty");
  bool any_positive = false;
  for (double v : w) {
    if (std::isnan(v) || v < 0.0) throw NegativeWeight("weights must be >= 0");
    if (v > 0.0) any_positive = true;
  }
  if (!any_positive) throw AllZeroWeight("at least one weight must be > 0");
  std::vector<std::size_t> identity(w.size());
  std::iota(identity.begin(), identity.end(), 0);
  return WeightVector(std::move(w), std::move(identity));
}

double WeightVector::sum() const {
  return std::accumulate(w_.begin(), w_.end(), 0.0);
}

double WeightVector::max() const {
  return *std::max_element(w_.begin(), w_.end());
}

bool WeightVector::strictly_positive() const {
  return *std::min_element(w_.begin(), w_.end()) > 0.0;
}

std::vector<double> WeightVector::to_input_order() const {
  std::vector<double> out(w_.size());
  for (std::size_t i = 0; i < w_.size(); ++i) out[perm_[i]] = w_[i];
  return out;
}

ComparisonInstance::ComparisonInstance(WeightVector a, WeightVector b)
    : a_(std::move(a)), b_(std::move(b)) {
  const std::size_t n = a_.size();
  f_.resize(n);
  logratio_.resize(n);
  prefix_.assign(n + 1, 0.0);
  suffix_.assign(n + 1, 0.0);

  for (std::size_t i = 0; i < n; ++i) {
    const double ai = a_[i], bi = b_[i];
    f_[i] = 1.0 / bi - 1.0 / ai;  // may be +-inf at zero weights
    logratio_[i] = std::log(ai / bi);
  }
  for (std::size_t i = 0; i < n; ++i) prefix_[i + 1] = prefix_[i] + logratio_[i];
  for (std::size_t i = n; i-- > 0;) suffix_[i] = suffix_[i + 1] + logratio_[i];
  two_ln_d_ = prefix_[n];

  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    if (f_[i] > best) {
      best = f_[i];
      argmax_first_ = i + 1;
    }
  }
  argmax_last_ = argmax_first_;
  for (std::size_t i = n; i-- > 0;) {
    if (f_[i] == best) {
      argmax_last_ = i + 1;
      break;
    }
  }
}

double ComparisonInstance::prefix_sum(std::size_t j) const {
  if (j > size()) throw IndexOutOfRange("prefix_sum: j out of range");
  return prefix_[j];
}

double ComparisonInstance::suffix_sum(std::size_t k) const {
  if (k < 1 || k > size() + 1) throw IndexOutOfRange("suffix_sum: k out of range");
  return suffix_[k - 1];
}

bool ComparisonInstance::strictly_positive() const {
  return a_.strictly_positive() && b_.strictly_positive();
}

void ComparisonInstance::require_strictly_positive(const char* who) const {
  if (!strictly_positive())
    throw ZeroWeight(std::string(who) + " requires strictly positive weights");
}

ComparisonInstance build_instance(const std::vector<double>& a_raw,
                                  const std::vector<double>& b_raw) {
  if (a_raw.size() != b_raw.size())
    throw LengthMismatch("vectors must have equal length");
  return ComparisonInstance(WeightVector::from_raw(a_raw),
                            WeightVector::from_raw(b_raw));
}

ComparisonInstance ComparisonInstance::from_canonical(std::vector<double> a,
                                                      std::vector<double> b) {
  if (a.size() != b.size())
    throw LengthMismatch("vectors must have equal length");
  return ComparisonInstance(WeightVector::from_ordered(std::move(a)),
                            WeightVector::from_ordered(std::move(b)));
}

const std::vector<double>& f_values(const ComparisonInstance& inst) {
  inst.require_strictly_positive("f_values");
  return inst.f();
}

double log_ratio_sums(const ComparisonInstance& inst, std::size_t k) {
  if (k < 1 || k > inst.size()) throw IndexOutOfRange("log_ratio_sums: k out of range");
  return inst.suffix_sum(k);
}

}  // namespace qfcert
