// Weighted chi-square CDF oracle.
//
// Inversion follows Imhof's classical formula (J. P. Imhof, Computing the
// Distribution of Quadratic Forms in Normal Variables, Biometrika 48, 1961):
//
//   beta(x, w) = 1/2 - (1/pi) * int_0^inf sin(theta(u)) / (u rho(u)) du,
//   theta(u)   = 1/2 sum_i arctan(w_i u) - x u / 2,
//   rho(u)     = prod_i (1 + w_i^2 u^2)^{1/4}.
//
// The integrand envelope g(u) = 1/(u rho(u)) decays like u^{-(m/2+1)} with m
// positive weights, too slowly for a raw truncation bound at small m. Past
// the point where theta' <= -x/4 the integrand oscillates at a near-constant
// rate, so the second mean value theorem plus integration by parts bounds the
// discarded tail by 12 g(U) / (pi x). The head [0, U] is split at half-period
// resolution and integrated by adaptive 15-point Gauss-Kronrod.
//
// m = 1 is a plain scaled chi_1^2 and is answered with erf directly: the
// oscillatory tail at m = 1 would need U ~ tol^{-2/3} to certify tight
// tolerances, far beyond any quadrature budget.

#include "qfcert/cdf.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <random>

#include "qfcert/sampling.hpp"

namespace qfcert {
namespace {

constexpr double kPi = 3.14159265358979323846;

// 15-point Kronrod / 7-point Gauss pair (QUADPACK dqk15 constants).
constexpr double kXgk[8] = {
    0.991455371120812639206854697526, 0.949107912342758524526189684048,
    0.864864423359769072789712788641, 0.741531185599394439863864773281,
    0.586087235467691130294144838259, 0.405845151377397166906606412077,
    0.207784955007898467600689403773, 0.0};
constexpr double kWgk[8] = {
    0.022935322010529224963732008059, 0.063092092629978553290700663189,
    0.104790010322250183839876322542, 0.140653259715525918745189590510,
    0.169004726639267902826583426599, 0.190350578064785409913256402421,
    0.204432940075298892414161999234, 0.209482141084727828012999174892};
constexpr double kWg[4] = {
    0.129484966168869693270611432679, 0.279705391489276667901467771424,
    0.381830050505118944950369775489, 0.417959183673469387755102040816};

struct SegResult {
  double value = 0.0;
  double err = 0.0;
};

template <class F>
SegResult gk15(const F& f, double a, double b) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  const double fc = f(c);
  double resk = kWgk[7] * fc;
  double resg = kWg[3] * fc;
  double f1s[7], f2s[7];
  for (int j = 0; j < 7; ++j) {
    const double dx = h * kXgk[j];
    f1s[j] = f(c - dx);
    f2s[j] = f(c + dx);
    resk += kWgk[j] * (f1s[j] + f2s[j]);
    if (j % 2 == 1) resg += kWg[j / 2] * (f1s[j] + f2s[j]);
  }
  const double reskh = resk * 0.5;
  double resabs = std::abs(resk);
  double resasc = kWgk[7] * std::abs(fc - reskh);
  for (int j = 0; j < 7; ++j)
    resasc += kWgk[j] * (std::abs(f1s[j] - reskh) + std::abs(f2s[j] - reskh));
  resabs *= std::abs(h);
  resasc *= std::abs(h);
  double err = std::abs((resk - resg) * h);
  if (resasc != 0.0 && err != 0.0)
    err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
  err = std::max(err, 50.0 * std::numeric_limits<double>::epsilon() * resabs);
  return {resk * h, err};
}

struct Imhof {
  const std::vector<double>& w;
  double x;

  double theta_rate(double u) const {  // 1/2 sum w/(1+w^2u^2)
    double s = 0.0;
    for (double wi : w) s += wi / (1.0 + wi * wi * u * u);
    return 0.5 * s;
  }
  double log_rho(double u) const {
    double s = 0.0;
    for (double wi : w) s += std::log1p(wi * wi * u * u);
    return 0.25 * s;
  }
  double envelope(double u) const { return std::exp(-log_rho(u)) / u; }
  double operator()(double u) const {
    double th = -0.5 * x * u;
    for (double wi : w) th += 0.5 * std::atan(wi * u);
    return std::sin(th) * std::exp(-log_rho(u)) / u;
  }

  bool tail_ok(double u, double bound) const {
    return theta_rate(u) <= 0.25 * x &&
           12.0 * envelope(u) / (kPi * x) <= bound;
  }
};

struct Segment {
  double err, a, b, value;
  bool operator<(const Segment& o) const { return err < o.err; }
};

CdfEstimate chi1_closed_form(double w, double x, double tol) {
  CdfEstimate est;
  est.method = Method::Inversion;
  est.x = x;
  est.value = std::erf(std::sqrt(0.5 * x / w));
  est.error_bound = std::min(tol, 1e-14);
  return est;
}

// --- Monte Carlo ---------------------------------------------------------

constexpr long long kChunk = 1 << 16;

// Box-Muller over explicit 53-bit uniforms so the stream depends only on
// std::mt19937_64, not on library-specific distribution internals.
class NormalStream {
 public:
  explicit NormalStream(std::uint64_t seed) : eng_(seed) {}
  double next() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    const double u1 = ((eng_() >> 11) + 1) * 0x1.0p-53;  // (0, 1]
    const double u2 = (eng_() >> 11) * 0x1.0p-53;        // [0, 1)
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double t = 2.0 * kPi * u2;
    spare_ = r * std::sin(t);
    have_spare_ = true;
    return r * std::cos(t);
  }

 private:
  std::mt19937_64 eng_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

// Counts of S < x_j for sorted thresholds, one chunked pass over the stream.
std::vector<long long> mc_counts_sorted(const std::vector<double>& w,
                                        const std::vector<double>& xs_sorted,
                                        long long n_samples,
                                        std::uint64_t seed) {
  const std::size_t n = w.size();
  const std::size_t k = xs_sorted.size();
  std::vector<long long> tally(k + 1, 0);
  const long long n_chunks = (n_samples + kChunk - 1) / kChunk;
  for (long long c = 0; c < n_chunks; ++c) {
    NormalStream rng(mix64(seed, static_cast<std::uint64_t>(c)));
    const long long lo = c * kChunk;
    const long long hi = std::min(n_samples, lo + kChunk);
    for (long long s = lo; s < hi; ++s) {
      double sum = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        const double z = rng.next();
        sum += w[i] * z * z;
      }
      const auto pos =
          std::upper_bound(xs_sorted.begin(), xs_sorted.end(), sum) -
          xs_sorted.begin();
      ++tally[static_cast<std::size_t>(pos)];
    }
  }
  // tally[p] counts samples landing before threshold p; prefix-sum it
  std::vector<long long> counts(k, 0);
  long long acc = 0;
  for (std::size_t j = 0; j < k; ++j) {
    acc += tally[j];
    counts[j] = acc;
  }
  return counts;
}

}  // namespace

CdfEstimate beta_cdf_inversion(const WeightVector& w, double x, double tol) {
  if (!(tol > 1e-12 && tol < 1e-2))
    throw Error("beta_cdf_inversion: tol must lie in (1e-12, 1e-2)");
  if (!std::isfinite(x)) throw Error("beta_cdf_inversion: x must be finite");

  std::vector<double> pos;
  for (double wi : w.weights())
    if (wi > 0.0) pos.push_back(wi);
  if (pos.empty()) throw AllZeroWeight("beta_cdf_inversion: all weights zero");

  CdfEstimate est;
  est.method = Method::Inversion;
  est.x = x;
  if (x <= 0.0) {
    est.value = 0.0;
    est.error_bound = 0.0;
    return est;
  }
  if (pos.size() == 1) return chi1_closed_form(pos[0], x, tol);

  const Imhof f{pos, x};

  // Truncation point: double until the oscillatory tail bound certifies
  // tol/2, then tighten back by geometric bisection.
  const double wmax = *std::max_element(pos.begin(), pos.end());
  double hi = 1.0 / wmax;
  for (int i = 0; i < 400 && !f.tail_ok(hi, 0.5 * tol); ++i) hi *= 2.0;
  double lo = 0.5 * hi;
  for (int i = 0; i < 60; ++i) {
    const double mid = std::sqrt(lo * hi);
    if (f.tail_ok(mid, 0.5 * tol))
      hi = mid;
    else
      lo = mid;
  }
  const double trunc = hi;
  const double tail_bound = 12.0 * f.envelope(trunc) / (kPi * x);

  // Initial knots: at most half an oscillation per segment, dyadic growth
  // cap. If the budget runs out the remainder becomes one coarse segment
  // whose error estimate forces the unreachable-tolerance path.
  constexpr std::size_t kMaxSegments = 400000;
  std::priority_queue<Segment> segs;
  double total = 0.0, err_sum = 0.0;
  std::size_t n_segs = 0;
  {
    double u = 0.0;
    const double floor_step = 0.25 / wmax;
    while (u < trunc) {
      double step = kPi / (f.theta_rate(u) + 0.5 * x);
      step = std::min(step, std::max(u, floor_step));
      double next = std::min(u + step, trunc);
      if (n_segs + 1 >= kMaxSegments / 2) next = trunc;
      const SegResult r = gk15(f, u, next);
      segs.push({r.err, u, next, r.value});
      total += r.value;
      err_sum += r.err;
      ++n_segs;
      u = next;
    }
  }

  const double quad_target = std::max(tol - tail_bound, 0.25 * tol);
  while (err_sum > quad_target && n_segs < kMaxSegments && !segs.empty()) {
    const Segment top = segs.top();
    if (top.err <= 0.0) break;
    segs.pop();
    const double mid = 0.5 * (top.a + top.b);
    const SegResult r1 = gk15(f, top.a, mid);
    const SegResult r2 = gk15(f, mid, top.b);
    total += r1.value + r2.value - top.value;
    err_sum += r1.err + r2.err - top.err;
    segs.push({r1.err, top.a, mid, r1.value});
    segs.push({r2.err, mid, top.b, r2.value});
    ++n_segs;
  }

  est.value = std::clamp(0.5 - total / kPi, 0.0, 1.0);
  est.error_bound = err_sum + tail_bound;
  if (est.error_bound > tol)
    throw ToleranceUnreachable("beta_cdf_inversion: tolerance not certified", est);
  return est;
}

CdfEstimate beta_cdf_mc(const WeightVector& w, double x, long long n_samples,
                        std::uint64_t seed) {
  return beta_cdf_mc_batch(w, {x}, n_samples, seed).front();
}

std::vector<CdfEstimate> beta_cdf_mc_batch(const WeightVector& w,
                                           const std::vector<double>& xs,
                                           long long n_samples,
                                           std::uint64_t seed) {
  if (n_samples < 1000) throw Error("beta_cdf_mc: n_samples must be >= 1000");
  std::vector<std::size_t> order(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](std::size_t i, std::size_t j) { return xs[i] < xs[j]; });
  std::vector<double> sorted(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) sorted[i] = xs[order[i]];

  const std::vector<long long> counts =
      mc_counts_sorted(w.weights(), sorted, n_samples, seed);

  std::vector<CdfEstimate> out(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    CdfEstimate e;
    e.method = Method::MonteCarlo;
    e.x = sorted[i];
    e.n_samples = n_samples;
    e.seed = seed;
    e.k_sigma = 3;
    if (sorted[i] <= 0.0) {
      e.value = 0.0;  // the form is a.s. positive
      e.error_bound = 0.0;
    } else {
      const double p = static_cast<double>(counts[i]) /
                       static_cast<double>(n_samples);
      e.value = p;
      e.error_bound =
          3.0 * std::sqrt(p * (1.0 - p) / static_cast<double>(n_samples));
    }
    out[order[i]] = e;
  }
  return out;
}

CompareResult compare_at(const WeightVector& a, const WeightVector& b, double x,
                         const CompareOptions& opts) {
  if (!(x > 0.0)) throw Error("compare_at: x must be > 0");
  CompareResult res;
  if (opts.method == Method::Inversion) {
    res.beta_a = beta_cdf_inversion(a, x, opts.tol);
    res.beta_b = beta_cdf_inversion(b, x, opts.tol);
  } else {
    res.beta_a = beta_cdf_mc(a, x, opts.n_samples, mix64(opts.seed, 1));
    res.beta_b = beta_cdf_mc(b, x, opts.n_samples, mix64(opts.seed, 2));
  }
  const double lo_a = res.beta_a.value - res.beta_a.error_bound;
  const double hi_a = res.beta_a.value + res.beta_a.error_bound;
  const double lo_b = res.beta_b.value - res.beta_b.error_bound;
  const double hi_b = res.beta_b.value + res.beta_b.error_bound;
  if (hi_a < lo_b)
    res.verdict = Order::OrderedAB;
  else if (hi_b < lo_a)
    res.verdict = Order::OrderedBA;
  else
    res.verdict = Order::Indistinguishable;
  return res;
}

}  // namespace qfcert
