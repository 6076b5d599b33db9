#include "qfcert/transforms.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "qfcert/roots.hpp"

namespace qfcert {
namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();
constexpr double kEqTol = 1e-10;

void check_step_postconditions(double prod_before, double prod_after,
                               double v_lo, double v_hi, double f_new,
                               double f_lo, double f_hi) {
  if (std::abs(prod_after - prod_before) >
      1e-12 * std::max(std::abs(prod_before), 1.0))
    throw InternalInconsistency("balance_pair: pair product not preserved");
  if (v_hi < v_lo - 1e-12 * std::max(1.0, std::abs(v_lo)))
    throw InternalInconsistency("balance_pair: nonmonotone result");
  if (!(f_new > f_lo - kEqTol && f_new < f_hi + kEqTol))
    throw InternalInconsistency("balance_pair: equalized f out of range");
}

double range_root(const ComparisonInstance& inst, std::size_t lo,
                  std::size_t hi, Side side) {
  return side == Side::A ? t_root_range(inst, lo, hi).value
                         : d_root_range(inst, lo, hi).value;
}

}  // namespace

BalanceResult balance_pair(const ComparisonInstance& inst, std::size_t i,
                           Side side) {
  const std::size_t n = inst.size();
  if (i < 1 || i + 1 > n) throw IndexOutOfRange("balance_pair: i out of range");
  inst.require_strictly_positive("balance_pair");
  const auto& f = inst.f();
  if (!(f[i] < f[i - 1]))
    throw NotApplicableStep("balance_pair: needs f(i+1) < f(i)");

  const double a1 = inst.a()[i - 1], a2 = inst.a()[i];
  const double b1 = inst.b()[i - 1], b2 = inst.b()[i];
  const double z = 4.0 * (1.0 / (a1 * a2) - 1.0 / (b1 * b2));

  BalanceResult out;
  out.step.index = i;
  out.step.z = z;

  // Parametrize by the new left entry with the right one tied to the exact
  // pair product: x^2 - g P x - P = 0 (side A, g = 1/b_{i+1} - 1/b_i >= 0)
  // resp. x^2 + g G x - G = 0 (side B, g = 1/a_i - 1/a_{i+1} <= 0). All terms
  // of the positive root add, so nothing cancels; this agrees with the
  // closed form ((1/a_i + 1/a_{i+1})^2 - z_i)^{1/2}/2 - ... on the b side.
  double f_new;
  if (side == Side::A) {
    const double prod = a1 * a2;
    const double g = 1.0 / b2 - 1.0 / b1;
    const double na1 =
        0.5 * (g * prod + std::sqrt(g * g * prod * prod + 4.0 * prod));
    const double na2 = prod / na1;
    f_new = 1.0 / b1 - 1.0 / na1;
    out.step.before = {a1, a2};
    out.step.after = {na1, na2};
    out.vec = inst.a().weights();
    out.vec[i - 1] = na1;
    out.vec[i] = na2;
    check_step_postconditions(prod, na1 * na2, na2, na1, f_new, f[i],
                              f[i - 1]);
  } else {
    const double prod = b1 * b2;
    const double g = 1.0 / a1 - 1.0 / a2;
    const double nb1 =
        0.5 * (-g * prod + std::sqrt(g * g * prod * prod + 4.0 * prod));
    const double nb2 = prod / nb1;
    f_new = 1.0 / nb1 - 1.0 / a1;
    out.step.before = {b1, b2};
    out.step.after = {nb1, nb2};
    out.vec = inst.b().weights();
    out.vec[i - 1] = nb1;
    out.vec[i] = nb2;
    check_step_postconditions(prod, nb1 * nb2, nb2, nb1, f_new, f[i],
                              f[i - 1]);
  }
  out.step.f_equalized = f_new;
  return out;
}

TransformTrace balance_limit(const ComparisonInstance& inst, Side side) {
  inst.require_strictly_positive("balance_limit");
  const std::size_t n = inst.size();
  const auto& a = inst.a().weights();
  const auto& b = inst.b().weights();
  const auto& f = inst.f();

  // Pool adjacent violators with product-preserving pooling: a merged range
  // takes the root of its own limit equation, which lies strictly between
  // the merged levels, so the final block levels are nondecreasing and the
  // result coincides with the fixed point of repeated balance_pair steps.
  // Equal-level neighbors are merged too, which leaves the vector unchanged
  // but reports maximal flat runs (k_star = 1 for identical vectors).
  struct Block {
    std::size_t lo, hi;
    double level;
  };
  std::vector<Block> blocks;
  for (std::size_t i = 1; i <= n; ++i) {
    blocks.push_back({i, i, f[i - 1]});
    while (blocks.size() >= 2) {
      const Block& right = blocks[blocks.size() - 1];
      const Block& left = blocks[blocks.size() - 2];
      if (left.level < right.level - kEqTol * (1.0 + std::abs(right.level)))
        break;
      Block merged{left.lo, right.hi,
                   range_root(inst, left.lo, right.hi, side)};
      blocks.pop_back();
      blocks.pop_back();
      blocks.push_back(merged);
    }
  }

  TransformTrace trace;
  trace.side = side;
  trace.limit.resize(n);
  for (const Block& blk : blocks) {
    SegmentRecord seg;
    seg.lo = blk.lo;
    seg.hi = blk.hi;
    seg.root_value = blk.level;
    double prod_before = 1.0, prod_after = 1.0;
    for (std::size_t i = blk.lo; i <= blk.hi; ++i) {
      double v;
      if (side == Side::A) {
        v = b[i - 1] / (1.0 - blk.level * b[i - 1]);
        prod_before *= a[i - 1];
      } else {
        v = a[i - 1] / (1.0 + blk.level * a[i - 1]);
        prod_before *= b[i - 1];
      }
      trace.limit[i - 1] = v;
      prod_after *= v;
    }
    seg.product_before = prod_before;
    seg.product_after = prod_after;
    trace.segments.push_back(seg);
  }
  trace.k_star = trace.segments.back().lo;

  for (std::size_t i = 0; i + 1 < n; ++i)
    if (trace.limit[i] < trace.limit[i + 1] - 1e-9 * (1.0 + trace.limit[i]))
      throw InternalInconsistency("balance_limit: limit vector not monotone");
  return trace;
}

std::optional<ComparisonInstance> reorder_for_increasing_f(
    const std::vector<double>& a_raw, const std::vector<double>& b_raw) {
  ComparisonInstance inst = build_instance(a_raw, b_raw);
  inst.require_strictly_positive("reorder_for_increasing_f");
  const auto& f = inst.f();
  for (std::size_t i = 0; i + 1 < f.size(); ++i)
    if (f[i] > f[i + 1]) return std::nullopt;
  return inst;
}

ChainTrace theorem2_chain(const ComparisonInstance& inst) {
  inst.require_strictly_positive("theorem2_chain");
  ChainTrace trace;
  const std::size_t n = inst.size();
  const auto& f = inst.f();
  const auto& a = inst.a().weights();
  for (std::size_t i = 0; i + 1 < n; ++i)
    if (f[i] > f[i + 1]) {
      trace.detail = "f not nondecreasing";
      trace.d = kNan;
      trace.g = kNan;
      return trace;
    }

  auto run_start = [&](std::size_t pos) {  // start of the f-run containing pos
    const double level = f[pos - 1];
    std::size_t s = pos;
    while (s > 1 && std::abs(f[s - 2] - level) <= kEqTol * (1.0 + std::abs(level)))
      --s;
    return s;
  };

  std::vector<double> b_cur = inst.b().weights();
  std::size_t s = run_start(n);
  double level = f[n - 1];

  auto g_value = [&](const std::vector<double>& bv, double d) {
    double g = 0.0;
    for (std::size_t i = 0; i < n; ++i) g += std::log(a[i] / bv[i]);
    return g / d;
  };

  while (s > 1 && inst.prefix_sum(s - 1) > 0.0) {
    const double new_level = f[s - 2];
    ChainStep step;
    step.flat_start = s;
    step.epsilon = level - new_level;
    step.level_after = new_level;
    const std::size_t r = run_start(s - 1);
    for (std::size_t i = r; i <= n; ++i)
      b_cur[i - 1] = 1.0 / (1.0 / a[i - 1] + new_level);
    step.b_after = b_cur;
    level = new_level;
    s = r;
    step.g_after = level != 0.0 ? g_value(b_cur, level) : kNan;
    trace.steps.push_back(std::move(step));
  }

  trace.applicable = true;
  trace.b_final = b_cur;
  trace.n1 = s;
  trace.d = level;
  trace.g = level > 0.0 ? g_value(b_cur, level) : kNan;
  return trace;
}

}  // namespace qfcert
