#include "qfcert/certificates.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "qfcert/transforms.hpp"

namespace qfcert {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

Certificate not_applicable(Rule r, std::string why) {
  Certificate c;
  c.rule = r;
  c.applicable = false;
  c.detail = std::move(why);
  return c;
}

double geometric_mean(const std::vector<double>& a,
                      const std::vector<std::size_t>& block) {
  double acc = 0.0;
  for (std::size_t i : block) acc += std::log(a[i - 1]);
  return std::exp(acc / static_cast<double>(block.size()));
}

bool block_feasible(const ComparisonInstance& inst,
                    const std::vector<std::size_t>& block) {
  const double a0 = geometric_mean(inst.a().weights(), block);
  for (std::size_t i : block)
    if (inst.b()[i - 1] > a0) return false;
  return true;
}

// Greedy over canonical order: start a block at the leftmost uncovered
// position and extend it while the geometric mean still covers the block's
// largest b. Fails fast when a position cannot anchor a block.
std::optional<std::vector<std::vector<std::size_t>>> greedy_partition(
    const ComparisonInstance& inst) {
  const std::size_t n = inst.size();
  const auto& a = inst.a().weights();
  const auto& b = inst.b().weights();
  std::vector<std::vector<std::size_t>> blocks;
  std::size_t p = 0;
  while (p < n) {
    if (a[p] < b[p]) return std::nullopt;
    double logsum = std::log(a[p]);
    std::size_t q = p + 1;
    while (q < n) {
      const double cand = (logsum + std::log(a[q])) / static_cast<double>(q - p + 1);
      if (std::exp(cand) < b[p]) break;
      logsum += std::log(a[q]);
      ++q;
    }
    std::vector<std::size_t> block(q - p);
    std::iota(block.begin(), block.end(), p + 1);
    blocks.push_back(std::move(block));
    p = q;
  }
  return blocks;
}

// All contiguous partitions of [1, n] (sorted vectors admit contiguous
// blocks without loss: swapping a block member for a larger-a, same-side
// position only raises the geometric mean).
std::optional<std::vector<std::vector<std::size_t>>> exhaustive_partition(
    const ComparisonInstance& inst) {
  const std::size_t n = inst.size();
  for (std::size_t mask = 0; mask < (1ULL << (n - 1)); ++mask) {
    std::vector<std::vector<std::size_t>> blocks;
    std::vector<std::size_t> cur = {1};
    for (std::size_t i = 1; i < n; ++i) {
      if (mask & (1ULL << (i - 1))) {
        blocks.push_back(cur);
        cur.clear();
      }
      cur.push_back(i + 1);
    }
    blocks.push_back(cur);
    bool ok = true;
    for (const auto& blk : blocks)
      if (!block_feasible(inst, blk)) {
        ok = false;
        break;
      }
    if (ok) return blocks;
  }
  return std::nullopt;
}

}  // namespace

std::string_view rule_name(Rule r) {
  switch (r) {
    case Rule::Bakirov: return "bakirov";
    case Rule::Lemma1Dominance: return "lemma1_dominance";
    case Rule::Lemma1PairSwap: return "lemma1_pair_swap";
    case Rule::Lemma1Partition: return "lemma1_partition";
    case Rule::Prop1: return "prop1";
    case Rule::Thm1: return "thm1";
    case Rule::Cor1: return "cor1";
    case Rule::Cor2: return "cor2";
    case Rule::Thm2: return "thm2";
  }
  return "?";
}

std::optional<Rule> rule_from_name(std::string_view name) {
  for (Rule r : {Rule::Bakirov, Rule::Lemma1Dominance, Rule::Lemma1PairSwap,
                 Rule::Lemma1Partition, Rule::Prop1, Rule::Thm1, Rule::Cor1,
                 Rule::Cor2, Rule::Thm2})
    if (rule_name(r) == name) return r;
  return std::nullopt;
}

std::string_view verdict_name(CertificationReport::Verdict v) {
  switch (v) {
    case CertificationReport::Verdict::Certified: return "certified";
    case CertificationReport::Verdict::Unknown: return "unknown";
    case CertificationReport::Verdict::ImpossibleAllX: return "impossible-all-x";
  }
  return "?";
}

Certificate bakirov(const ComparisonInstance& inst) {
  Certificate c;
  c.rule = Rule::Bakirov;
  const auto& a = inst.a().weights();
  const auto& b = inst.b().weights();
  double sa = 0.0, sb = 0.0;
  for (std::size_t k = 0; k < inst.size(); ++k) {
    sa += a[k];
    sb += b[k];
    if (sa < sb) {
      return not_applicable(Rule::Bakirov,
                            "partial sum fails at k=" + std::to_string(k + 1));
    }
  }
  c.applicable = true;
  c.region = Region{Region::Kind::AtLeast, 2.0 * sb};
  c.witness["x_star"] = 2.0 * sb;
  c.witness["sum_b"] = sb;
  return c;
}

Certificate dominance(const ComparisonInstance& inst) {
  Certificate c;
  c.rule = Rule::Lemma1Dominance;
  const auto& a = inst.a().weights();
  const auto& b = inst.b().weights();
  for (std::size_t i = 0; i < inst.size(); ++i)
    if (a[i] < b[i])
      return not_applicable(Rule::Lemma1Dominance,
                            "a < b at i=" + std::to_string(i + 1));
  c.applicable = true;
  c.region = Region{Region::Kind::AllX, 0.0};
  return c;
}

Certificate pair_swap_applicable(const ComparisonInstance& inst, std::size_t i,
                                 std::size_t j) {
  const std::size_t n = inst.size();
  if (i < 1 || i > n || j < 1 || j > n)
    throw IndexOutOfRange("pair_swap: index out of range");
  if (i == j) throw IndexOutOfRange("pair_swap: indices must differ");
  Certificate c;
  c.rule = Rule::Lemma1PairSwap;
  c.witness["i"] = static_cast<double>(i);
  c.witness["j"] = static_cast<double>(j);
  const auto& a = inst.a().weights();
  const auto& b = inst.b().weights();
  const double ai = a[i - 1], aj = a[j - 1], bi = b[i - 1], bj = b[j - 1];
  if (std::max(ai, aj) < std::max(bi, bj))
    return not_applicable(Rule::Lemma1PairSwap, "max condition fails");
  if (ai * aj < bi * bj)
    return not_applicable(Rule::Lemma1PairSwap, "product condition fails");
  for (std::size_t k = 1; k <= n; ++k)
    if (k != i && k != j && a[k - 1] < b[k - 1])
      return not_applicable(Rule::Lemma1PairSwap,
                            "a < b at k=" + std::to_string(k));
  c.applicable = true;
  c.region = Region{Region::Kind::AllX, 0.0};
  return c;
}

Certificate partition_certificate(
    const ComparisonInstance& inst,
    const std::optional<std::vector<std::vector<std::size_t>>>& partition) {
  Certificate c;
  c.rule = Rule::Lemma1Partition;
  const std::size_t n = inst.size();
  if (partition) {
    std::vector<bool> seen(n, false);
    std::size_t covered = 0;
    for (const auto& blk : *partition) {
      if (blk.empty()) throw InvalidPartition("empty block");
      for (std::size_t i : blk) {
        if (i < 1 || i > n) throw InvalidPartition("index out of range");
        if (seen[i - 1]) throw InvalidPartition("index repeated");
        seen[i - 1] = true;
        ++covered;
      }
    }
    if (covered != n) throw InvalidPartition("partition must cover all indices");
    for (const auto& blk : *partition)
      if (!block_feasible(inst, blk))
        return not_applicable(Rule::Lemma1Partition, "block infeasible");
    c.applicable = true;
    c.region = Region{Region::Kind::AllX, 0.0};
    c.blocks = *partition;
    return c;
  }

  auto found = greedy_partition(inst);
  if (!found && n <= 10) {
    found = exhaustive_partition(inst);
    if (found) c.detail = "exhaustive";
  }
  if (!found)
    return not_applicable(Rule::Lemma1Partition,
                          n <= 10 ? "no feasible partition"
                                  : "greedy search failed (n > 10)");
  c.applicable = true;
  c.region = Region{Region::Kind::AllX, 0.0};
  c.blocks = *found;
  return c;
}

Certificate prop1(const ComparisonInstance& inst,
                  const std::optional<std::vector<double>>& c_raw,
                  const std::optional<std::vector<double>>& d_raw) {
  inst.require_strictly_positive("prop1");
  Certificate cert;
  cert.rule = Rule::Prop1;

  const ComparisonInstance* work = &inst;
  std::optional<ComparisonInstance> aux;
  if (c_raw || d_raw) {
    std::vector<double> c = c_raw ? *c_raw : inst.a().weights();
    std::vector<double> d = d_raw ? *d_raw : inst.b().weights();
    aux.emplace(build_instance(c, d));
    // componentwise in canonical order; equivalent to the existence of a
    // common pairing with c <= a and d >= b
    for (std::size_t i = 0; i < inst.size(); ++i) {
      if (aux->a()[i] > inst.a()[i])
        throw InvalidAuxiliary("prop1: c must satisfy c <= a");
      if (aux->b()[i] < inst.b()[i])
        throw InvalidAuxiliary("prop1: d must satisfy d >= b");
    }
    aux->require_strictly_positive("prop1");
    work = &*aux;
    cert.aux_c = aux->a().weights();
    cert.aux_d = aux->b().weights();
  }

  const double two_ln_d = work->two_ln_d();
  const double max_f = work->max_f();
  if (!(two_ln_d > 0.0))
    return not_applicable(Rule::Prop1, "D(c,d) <= 1");
  if (!(max_f > 0.0)) return not_applicable(Rule::Prop1, "max f <= 0");

  cert.applicable = true;
  const double x_star = two_ln_d / max_f;
  cert.region = Region{Region::Kind::AtMost, x_star};
  cert.witness["x_star"] = x_star;
  cert.witness["two_ln_d"] = two_ln_d;
  cert.witness["max_f"] = max_f;
  cert.witness["i_max"] = static_cast<double>(work->argmax_first());
  return cert;
}

// k1/k2 mark the start of the final flat suffix of the balancing limit.
// The forward scan min{k : f(k) >= T(k)} describes it only when f is shaped
// so that the limit flattens the whole suffix; for general shapes the suffix
// block of the pooled limit is the sound object (f(n) can only rise under
// admissible balancing steps, so a flat level below a later f value is not
// reachable). Both definitions coincide on regular instances.
std::size_t k1_index(const ComparisonInstance& inst) {
  return balance_limit(inst, Side::A).k_star;
}

std::size_t k2_index(const ComparisonInstance& inst) {
  return balance_limit(inst, Side::B).k_star;
}

Certificate theorem1(const ComparisonInstance& inst) {
  inst.require_strictly_positive("theorem1");
  Certificate c;
  c.rule = Rule::Thm1;
  const double two_ln_d = inst.two_ln_d();
  if (!(two_ln_d > 0.0)) return not_applicable(Rule::Thm1, "2 ln D <= 0");

  const std::size_t k1 = k1_index(inst);
  const std::size_t k2 = k2_index(inst);
  const RootResult t = t_root(inst, k1);
  const RootResult d = d_root(inst, k2);
  const double denom = std::min(t.value, d.value);
  c.witness["k1"] = static_cast<double>(k1);
  c.witness["k2"] = static_cast<double>(k2);
  c.witness["t_k1"] = t.value;
  c.witness["d_k2"] = d.value;
  c.witness["two_ln_d"] = two_ln_d;
  if (!(denom > 0.0)) {
    c.applicable = false;
    c.detail = "min{T(k1), D(k2)} <= 0";
    return c;
  }
  c.applicable = true;
  const double x_star = two_ln_d / denom;
  c.region = Region{Region::Kind::AtMost, x_star};
  c.witness["x_star"] = x_star;
  return c;
}

Certificate corollary1(const ComparisonInstance& inst) {
  inst.require_strictly_positive("corollary1");
  Certificate c;
  c.rule = Rule::Cor1;
  const auto& a = inst.a().weights();
  const auto& b = inst.b().weights();
  const std::size_t n = inst.size();
  if (a[0] < b[0]) return not_applicable(Rule::Cor1, "a1 < b1");
  const double s = inst.two_ln_d();
  if (s < 0.0) return not_applicable(Rule::Cor1, "sum ln(a/b) < 0");

  const double f1 = inst.f()[0];
  double lhs_a = s, lhs_b = s;
  for (std::size_t i = 0; i < n; ++i) {
    lhs_a += std::log1p(-f1 * b[i]);  // 1 - f1 b_i > 0 since f1 < 1/b_1
    lhs_b -= std::log1p(f1 * a[i]);
  }
  c.witness["cond_a"] = lhs_a;
  c.witness["cond_b"] = lhs_b;
  // The side conditions ask for f(1) >= T(1) (resp. D(1)); the conclusion
  // additionally needs the limit to flatten the whole vector at that level,
  // i.e. k1 = 1 (resp. k2 = 1). On regular shapes the former implies the
  // latter; on cascade shapes it does not, and the certificate must not fire.
  const bool branch_a = lhs_a <= 0.0 && k1_index(inst) == 1;
  const bool branch_b = lhs_b <= 0.0 && k2_index(inst) == 1;
  if (branch_a || branch_b) {
    c.applicable = true;
    c.region = Region{Region::Kind::AllX, 0.0};
    c.detail = branch_a ? (branch_b ? "both" : "condition_a") : "condition_b";
    return c;
  }
  return not_applicable(Rule::Cor1, "no side condition yields a full flat limit");
}

Certificate corollary2(const ComparisonInstance& inst) {
  inst.require_strictly_positive("corollary2");
  Certificate c;
  c.rule = Rule::Cor2;
  if (inst.argmax_first() != 1)
    return not_applicable(Rule::Cor2, "f(1) is not the maximum");
  if (inst.two_ln_d() < 0.0)
    return not_applicable(Rule::Cor2, "prod a < prod b");
  // route: k1 = 1 and the Jensen bound T(1) <= sum ln(a/b) / sum b; the
  // first step needs the limit to flatten at T(1), which a leading maximum
  // guarantees only on regular shapes
  if (k1_index(inst) != 1)
    return not_applicable(Rule::Cor2, "limit does not flatten at T(1)");
  c.applicable = true;
  const double x_star = inst.b().sum();
  c.region = Region{Region::Kind::AtMost, x_star};
  c.witness["x_star"] = x_star;
  return c;
}

std::size_t n1_index(const ComparisonInstance& inst) {
  inst.require_strictly_positive("n1_index");
  const std::size_t n = inst.size();
  std::size_t m = n + 1;  // sentinel: not defined
  for (std::size_t j = n; j >= 1; --j) {
    if (inst.prefix_sum(j) < 0.0) break;
    m = j;
  }
  return m;
}

Certificate theorem2(const ComparisonInstance& inst) {
  inst.require_strictly_positive("theorem2");
  Certificate c;
  c.rule = Rule::Thm2;
  const auto& f = inst.f();
  const std::size_t n = inst.size();
  for (std::size_t i = 0; i + 1 < n; ++i)
    if (f[i] > f[i + 1])
      return not_applicable(Rule::Thm2, "f not nondecreasing");

  const std::size_t n1 = n1_index(inst);
  if (n1 > n) return not_applicable(Rule::Thm2, "n1 not defined");
  c.witness["n1"] = static_cast<double>(n1);
  if (n1 == 1) {
    // prefix sums all nonnegative and f nondecreasing force a >= b
    c.applicable = true;
    c.region = Region{Region::Kind::AllX, 0.0};
    c.detail = "n1 = 1 (dominance)";
    return c;
  }
  const double d = f[n1 - 1];
  c.witness["d"] = d;
  if (!(d > 0.0)) {
    c.applicable = false;
    c.detail = "d <= 0";
    return c;
  }
  double g = inst.prefix_sum(n1 - 1);
  for (std::size_t i = n1 - 1; i < n; ++i)
    g += std::log1p(d * inst.a()[i]);
  g /= d;
  c.witness["g"] = g;
  if (!(g > 0.0)) {
    c.applicable = false;
    c.detail = "threshold not positive";
    return c;
  }
  c.applicable = true;
  c.region = Region{Region::Kind::AtMost, g};
  c.witness["x_star"] = g;
  return c;
}

bool necessary_max(const ComparisonInstance& inst) {
  return inst.a().max() >= inst.b().max();
}

std::vector<Interval> merge_regions(const std::vector<Certificate>& certs) {
  std::vector<Interval> iv;
  for (const auto& c : certs) {
    if (!c.applicable || !c.region) continue;
    switch (c.region->kind) {
      case Region::Kind::AllX: iv.push_back({0.0, kInf}); break;
      case Region::Kind::AtMost: iv.push_back({0.0, c.region->x_star}); break;
      case Region::Kind::AtLeast: iv.push_back({c.region->x_star, kInf}); break;
    }
  }
  std::sort(iv.begin(), iv.end(),
            [](const Interval& u, const Interval& v) { return u.lo < v.lo; });
  std::vector<Interval> out;
  for (const auto& s : iv) {
    if (!out.empty() && s.lo <= out.back().hi)
      out.back().hi = std::max(out.back().hi, s.hi);
    else
      out.push_back(s);
  }
  return out;
}

bool union_contains(const std::vector<Interval>& u, double x) {
  for (const auto& s : u)
    if (x >= s.lo && x <= s.hi) return true;
  return false;
}

CertificationReport certify_all(const ComparisonInstance& inst,
                                std::optional<double> x,
                                const CertifyOptions& opts) {
  CertificationReport rep;
  rep.x_query = x;
  rep.max_possible = necessary_max(inst);

  // Rules built on f / log ratios refuse zero weights; report those as
  // inapplicable rather than failing the whole aggregation.
  auto guarded = [&](auto&& fn, Rule r) {
    try {
      rep.certificates.push_back(fn());
    } catch (const ZeroWeight&) {
      rep.certificates.push_back(
          not_applicable(r, "requires strictly positive weights"));
    }
  };

  rep.certificates.push_back(bakirov(inst));
  rep.certificates.push_back(dominance(inst));

  {
    Certificate ps = not_applicable(Rule::Lemma1PairSwap, "no feasible pair");
    if (inst.size() > opts.pair_swap_max_n) {
      ps.detail = "skipped (n > " + std::to_string(opts.pair_swap_max_n) + ")";
    } else if (inst.size() >= 2) {
      for (std::size_t i = 1; i <= inst.size() && !ps.applicable; ++i)
        for (std::size_t j = i + 1; j <= inst.size(); ++j) {
          Certificate cand = pair_swap_applicable(inst, i, j);
          if (cand.applicable) {
            ps = std::move(cand);
            break;
          }
        }
    }
    rep.certificates.push_back(std::move(ps));
  }

  rep.certificates.push_back(partition_certificate(inst));
  guarded([&] { return prop1(inst); }, Rule::Prop1);
  guarded([&] { return theorem1(inst); }, Rule::Thm1);
  guarded([&] { return corollary1(inst); }, Rule::Cor1);
  guarded([&] { return corollary2(inst); }, Rule::Cor2);
  guarded([&] { return theorem2(inst); }, Rule::Thm2);

  if (opts.include_transform_candidates && inst.strictly_positive()) {
    const ChainTrace chain = theorem2_chain(inst);
    if (chain.applicable && chain.d > 0.0) {
      Certificate cand = prop1(inst, std::nullopt, chain.b_final);
      cand.detail = "auxiliary d from the flattening chain";
      rep.certificates.push_back(std::move(cand));
    }
  }

  if (!rep.max_possible)
    for (const auto& c : rep.certificates)
      if (c.applicable && c.region && c.region->kind == Region::Kind::AllX)
        throw InternalInconsistency(
            "all-x certificate fired although max a < max b");

  rep.region_union = merge_regions(rep.certificates);
  if (x) {
    if (union_contains(rep.region_union, *x))
      rep.holds_at_x = CertificationReport::Verdict::Certified;
    else if (!rep.max_possible && *x >= 2.0 * inst.b().sum())
      // The necessity analysis refutes the ordering only for large x; an
      // uncovered query below the classical 2 sum(b) threshold stays unknown.
      rep.holds_at_x = CertificationReport::Verdict::ImpossibleAllX;
    else
      rep.holds_at_x = CertificationReport::Verdict::Unknown;
  }
  return rep;
}

Region recompute_region(const ComparisonInstance& inst, const Certificate& c) {
  switch (c.rule) {
    case Rule::Bakirov:
      return Region{Region::Kind::AtLeast, 2.0 * inst.b().sum()};
    case Rule::Lemma1Dominance:
    case Rule::Lemma1PairSwap:
    case Rule::Lemma1Partition:
    case Rule::Cor1:
      return Region{Region::Kind::AllX, 0.0};
    case Rule::Prop1: {
      if (!c.aux_c.empty() || !c.aux_d.empty()) {
        const auto aux = build_instance(
            c.aux_c.empty() ? inst.a().weights() : c.aux_c,
            c.aux_d.empty() ? inst.b().weights() : c.aux_d);
        return Region{Region::Kind::AtMost, aux.two_ln_d() / aux.max_f()};
      }
      return Region{Region::Kind::AtMost, inst.two_ln_d() / inst.max_f()};
    }
    case Rule::Thm1: {
      const auto k1 = static_cast<std::size_t>(c.witness.at("k1"));
      const auto k2 = static_cast<std::size_t>(c.witness.at("k2"));
      const double denom =
          std::min(t_root(inst, k1).value, d_root(inst, k2).value);
      return Region{Region::Kind::AtMost, inst.two_ln_d() / denom};
    }
    case Rule::Cor2:
      return Region{Region::Kind::AtMost, inst.b().sum()};
    case Rule::Thm2: {
      const auto n1 = static_cast<std::size_t>(c.witness.at("n1"));
      if (n1 == 1) return Region{Region::Kind::AllX, 0.0};
      const double d = inst.f()[n1 - 1];
      double g = inst.prefix_sum(n1 - 1);
      for (std::size_t i = n1 - 1; i < inst.size(); ++i)
        g += std::log1p(d * inst.a()[i]);
      return Region{Region::Kind::AtMost, g / d};
    }
  }
  throw InternalInconsistency("recompute_region: unknown rule");
}

}  // namespace qfcert
