#ifndef QFCERT_TRANSFORMS_HPP
#define QFCERT_TRANSFORMS_HPP

#include <array>
#include <cstddef>
#include <optional>
#include <vector>

#include "qfcert/weights.hpp"

namespace qfcert {

enum class Side { A, B };

/// One product-preserving balancing step at adjacent positions (i, i+1):
/// the touched pair is replaced so that f becomes equal at both positions
/// while the pair product is unchanged. Side A edits a (raising beta),
/// side B edits b (lowering beta).
struct BalanceStep {
  std::size_t index = 1;  // 1-based left position
  double z = 0.0;         // 4 (1/(a_i a_{i+1}) - 1/(b_i b_{i+1}))
  std::array<double, 2> before{}, after{};
  double f_equalized = 0.0;
};

struct BalanceResult {
  std::vector<double> vec;  // full updated vector (canonical order)
  BalanceStep step;
};

/// Requires f(i+1) < f(i); throws NotApplicableStep otherwise.
BalanceResult balance_pair(const ComparisonInstance& inst, std::size_t i,
                           Side side);

struct SegmentRecord {
  std::size_t lo = 1, hi = 1;  // 1-based inclusive
  double root_value = 0.0;     // flat f level on the segment
  double product_before = 0.0, product_after = 0.0;
};

/// The limit of repeated balancing on one side, computed in closed form by
/// recursive suffix segmentation: the suffix [k*, n] is set to the root level
/// of its limit equation, then the prefix is segmented the same way. The
/// result has piecewise-constant nondecreasing f and preserves the product
/// on every segment.
struct TransformTrace {
  Side side = Side::A;
  std::vector<BalanceStep> steps;  // empty: the limit is computed directly
  std::vector<double> limit;       // canonical order
  std::size_t k_star = 1;          // outermost segment start (k1 resp. k2)
  std::vector<SegmentRecord> segments;  // outermost first
};

TransformTrace balance_limit(const ComparisonInstance& inst, Side side);

/// Canonical sorted-descending pairing of both inputs; returns the instance
/// when the induced f is nondecreasing (the ordering Theorem 2 needs),
/// nullopt otherwise.
std::optional<ComparisonInstance> reorder_for_increasing_f(
    const std::vector<double>& a_raw, const std::vector<double>& b_raw);

/// One flattening step of the suffix chain: the flat region of f is extended
/// left from flat_start to cover the next lower level.
struct ChainStep {
  std::size_t flat_start = 1;  // run start being extended FROM (1-based)
  double epsilon = 0.0;        // decrease applied to 1/b on the flat suffix
  double level_after = 0.0;    // new flat f level
  double g_after = 0.0;        // threshold G(n, a, b') after the step
  std::vector<double> b_after;
};

/// Iterated suffix flattening of b (b grows componentwise, beta(x, b')
/// only decreases) while the prefix log-ratio sum stays positive. The final
/// level d and threshold G reproduce the Theorem-2 certificate values.
struct ChainTrace {
  bool applicable = false;
  std::string detail;
  std::vector<ChainStep> steps;
  std::vector<double> b_final;
  std::size_t n1 = 1;   // final flat start
  double d = 0.0;       // final flat level (NaN if not positive-defined)
  double g = 0.0;       // final threshold (NaN if undefined)
};

ChainTrace theorem2_chain(const ComparisonInstance& inst);

}  // namespace qfcert

#endif  // QFCERT_TRANSFORMS_HPP
