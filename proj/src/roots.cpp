#include "qfcert/roots.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <string>

namespace qfcert {
namespace {

// Safeguarded solve of a strictly decreasing h on an analytic bracket
// [lo, hi] with h(lo) >= 0 >= h(hi). Bisection with secant acceleration,
// stopping on the residual target (or bracket exhaustion).
RootResult solve_decreasing(const std::function<double(double)>& h, double lo,
                            double hi, double resid_target) {
  RootResult out;
  out.lo = lo;
  out.hi = hi;
  double flo = h(lo), fhi = h(hi);
  if (flo <= resid_target) {  // root at (or numerically at) the lower end
    out.value = lo;
    out.residual = std::abs(flo);
    return out;
  }
  if (std::abs(fhi) <= resid_target) {
    out.value = hi;
    out.residual = std::abs(fhi);
    return out;
  }
  double mid = 0.5 * (lo + hi);
  double fmid = h(mid);
  for (int it = 0; it < 200; ++it) {
    if (std::abs(fmid) <= 0.25 * resid_target) break;
    if (fmid > 0.0) {
      lo = mid;
      flo = fmid;
    } else {
      hi = mid;
      fhi = fmid;
    }
    if (hi - lo <= 1e-17 * (1.0 + std::abs(lo) + std::abs(hi))) break;
    // secant proposal, clipped well inside the bracket
    double prop = lo - flo * (hi - lo) / (fhi - flo);
    const double guard = 0.01 * (hi - lo);
    if (!(prop > lo + guard && prop < hi - guard)) prop = 0.5 * (lo + hi);
    mid = prop;
    fmid = h(mid);
  }
  out.value = mid;
  out.residual = std::abs(fmid);
  return out;
}

void check_range(const ComparisonInstance& inst, std::size_t k,
                 std::size_t end, const char* who) {
  if (k < 1 || end > inst.size() || k > end)
    throw IndexOutOfRange(std::string(who) + ": index out of range");
}

double range_sum(const ComparisonInstance& inst, std::size_t k,
                 std::size_t end) {
  return inst.suffix_sum(k) - inst.suffix_sum(end + 1);
}

}  // namespace

RootResult t_root_range(const ComparisonInstance& inst, std::size_t k,
                        std::size_t end) {
  check_range(inst, k, end, "t_root");
  inst.require_strictly_positive("t_root");
  const auto& b = inst.b().weights();
  const double s = range_sum(inst, k, end);
  const double resid_target = 1e-11 * (1.0 + std::abs(s));

  RootResult out;
  out.k = k;
  if (s == 0.0) {  // T = 0 solves the equation exactly
    out.value = 0.0;
    out.residual = 0.0;
    return out;
  }
  const double b_max = b[k - 1];  // largest b on the suffix (monotone order)
  auto h = [&](double t) {
    double acc = s;
    for (std::size_t i = k - 1; i < end; ++i) {
      const double arg = -t * b[i];
      if (arg <= -1.0) return -std::numeric_limits<double>::infinity();
      acc += std::log1p(arg);
    }
    return acc;
  };
  double lo, hi;
  if (s > 0.0) {
    lo = 0.0;
    hi = -std::expm1(-std::min(s, 700.0)) / b_max;  // (1 - e^{-s})/b_max
  } else {
    lo = -std::expm1(std::min(-s, 700.0)) / b_max;  // -(e^{|s|} - 1)/b_max
    hi = 0.0;
  }
  RootResult r = solve_decreasing(h, lo, hi, resid_target);
  r.k = k;
  return r;
}

RootResult d_root_range(const ComparisonInstance& inst, std::size_t k,
                        std::size_t end) {
  check_range(inst, k, end, "d_root");
  inst.require_strictly_positive("d_root");
  const auto& a = inst.a().weights();
  const double s = range_sum(inst, k, end);
  const double resid_target = 1e-11 * (1.0 + std::abs(s));

  RootResult out;
  out.k = k;
  if (s == 0.0) {
    out.value = 0.0;
    out.residual = 0.0;
    return out;
  }
  const double a_max = a[k - 1];
  auto h = [&](double d) {
    double acc = s;
    for (std::size_t i = k - 1; i < end; ++i) {
      const double arg = d * a[i];
      if (arg <= -1.0) return std::numeric_limits<double>::infinity();
      acc -= std::log1p(arg);
    }
    return acc;
  };
  double lo, hi;
  if (s > 0.0) {
    lo = 0.0;
    hi = std::expm1(std::min(s, 700.0)) / a_max;  // (e^s - 1)/a_max
  } else {
    lo = std::expm1(-std::min(-s, 700.0)) / a_max;  // (e^{-|s|} - 1)/a_max
    hi = 0.0;
  }
  RootResult r = solve_decreasing(h, lo, hi, resid_target);
  r.k = k;
  return r;
}

RootResult t_root(const ComparisonInstance& inst, std::size_t k) {
  return t_root_range(inst, k, inst.size());
}

RootResult d_root(const ComparisonInstance& inst, std::size_t k) {
  return d_root_range(inst, k, inst.size());
}

JensenBounds jensen_bounds(const ComparisonInstance& inst, std::size_t k) {
  const std::size_t n = inst.size();
  if (k < 1 || k > n) throw IndexOutOfRange("jensen_bounds: k out of range");
  inst.require_strictly_positive("jensen_bounds");
  const auto& a = inst.a().weights();
  const auto& b = inst.b().weights();
  const double s = inst.suffix_sum(k);
  const double m = static_cast<double>(n - k + 1);
  double sum_a = 0.0, sum_b = 0.0;
  for (std::size_t i = k - 1; i < n; ++i) {
    sum_a += a[i];
    sum_b += b[i];
  }
  JensenBounds jb;
  jb.t_upper_tight = -m * std::expm1(-s / m) / sum_b;
  jb.t_upper_loose = s / sum_b;
  jb.d_lower = s / sum_a;
  return jb;
}

}  // namespace qfcert
