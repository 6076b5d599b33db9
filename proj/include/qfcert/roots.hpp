#ifndef QFCERT_ROOTS_HPP
#define QFCERT_ROOTS_HPP

#include <cstddef>

#include "qfcert/weights.hpp"

namespace qfcert {

/// Root of one of the two balancing-limit equations on a suffix [k, n]:
///   T(k): sum ln(a_i/b_i) + sum ln(1 - T b_i) = 0   on (-inf, 1/b_k)
///   D(k): sum ln(a_i/b_i) - sum ln(1 + D a_i) = 0   on (-1/a_k, inf)
/// Both left sides are strictly monotone in the unknown, so the root is
/// unique; its sign matches the sign of the suffix log-ratio sum.
struct RootResult {
  std::size_t k = 1;       // 1-based suffix start
  double value = 0.0;
  double residual = 0.0;   // |equation(value)|
  double lo = 0.0, hi = 0.0;  // bracket that contained the root
};

RootResult t_root(const ComparisonInstance& inst, std::size_t k);
RootResult d_root(const ComparisonInstance& inst, std::size_t k);

// Range-restricted variants treating [k, end] as the whole problem; used by
// the limit-transform segmentation. end is 1-based and inclusive.
RootResult t_root_range(const ComparisonInstance& inst, std::size_t k,
                        std::size_t end);
RootResult d_root_range(const ComparisonInstance& inst, std::size_t k,
                        std::size_t end);

/// Jensen / log-inequality bounds on the roots over the suffix [k, n]:
/// t_root <= t_upper_tight <= t_upper_loose and d_root >= d_lower.
struct JensenBounds {
  double t_upper_tight = 0.0;  // (n-k+1)(1 - (prod b/a)^{1/(n-k+1)}) / sum b
  double t_upper_loose = 0.0;  // sum ln(a/b) / sum b
  double d_lower = 0.0;        // sum ln(a/b) / sum a
};

JensenBounds jensen_bounds(const ComparisonInstance& inst, std::size_t k);

}  // namespace qfcert

#endif  // QFCERT_ROOTS_HPP
