#ifndef QFCERT_CERTIFICATES_HPP
#define QFCERT_CERTIFICATES_HPP

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qfcert/roots.hpp"
#include "qfcert/weights.hpp"

namespace qfcert {

enum class Rule {
  Bakirov,
  Lemma1Dominance,
  Lemma1PairSwap,
  Lemma1Partition,
  Prop1,
  Thm1,
  Cor1,
  Cor2,
  Thm2,
};

std::string_view rule_name(Rule r);
std::optional<Rule> rule_from_name(std::string_view name);

/// Validity region of a certificate on the x axis (x > 0 understood).
struct Region {
  enum class Kind { AllX, AtMost, AtLeast };
  Kind kind = Kind::AllX;
  double x_star = 0.0;  // threshold for AtMost / AtLeast

  bool contains(double x) const {
    switch (kind) {
      case Kind::AllX: return x > 0.0;
      case Kind::AtMost: return x > 0.0 && x <= x_star;
      case Kind::AtLeast: return x >= x_star;
    }
    return false;
  }
};

/// One rule evaluation. When applicable, the witnesses are sufficient to
/// recompute the region from the instance (see recompute_region).
struct Certificate {
  Rule rule = Rule::Prop1;
  bool applicable = false;
  std::optional<Region> region;
  std::map<std::string, double> witness;             // scalar witnesses
  std::vector<std::vector<std::size_t>> blocks;      // partition witness, 1-based
  std::vector<double> aux_c, aux_d;                  // prop1 auxiliary pair
  std::string detail;                                // branch taken / skip note
};

// --- individual rules (indices are 1-based) -------------------------------

// Partial-sum comparison; valid for x >= 2 sum b.
Certificate bakirov(const ComparisonInstance& inst);

// Componentwise b <= a; valid for all x.
Certificate dominance(const ComparisonInstance& inst);

// Two components may trade mass: max{a_i,a_j} >= max{b_i,b_j} and
// a_i a_j >= b_i b_j with dominance elsewhere; valid for all x.
Certificate pair_swap_applicable(const ComparisonInstance& inst, std::size_t i,
                                 std::size_t j);

// Block geometric means of a dominate b blockwise; valid for all x.
// With no partition given, searches (greedy, then exhaustive contiguous
// partitions for n <= 10) and returns the first feasible one as witness.
Certificate partition_certificate(
    const ComparisonInstance& inst,
    const std::optional<std::vector<std::vector<std::size_t>>>& partition =
        std::nullopt);

// Core threshold x <= 2 ln D(c,d) / max_i f(i,c,d) with auxiliaries
// c <= a, d >= b (defaults c = a, d = b).
Certificate prop1(const ComparisonInstance& inst,
                  const std::optional<std::vector<double>>& c = std::nullopt,
                  const std::optional<std::vector<double>>& d = std::nullopt);

// Start of the final flat suffix of the side-A (resp. side-B) balancing
// limit: the largest k whose left neighbor stays strictly below the suffix
// block's root level, with cascaded merges accounted for. Equals
// min{k: f(k) >= T(k)} on regular shapes; at k = n both roots equal f(n).
std::size_t k1_index(const ComparisonInstance& inst);
std::size_t k2_index(const ComparisonInstance& inst);

// Balanced-limit threshold x <= 2 ln D / min{T(k1), D(k2)}.
Certificate theorem1(const ComparisonInstance& inst);

// All-x certificate from k1 = 1 (or k2 = 1) conditions.
Certificate corollary1(const ComparisonInstance& inst);

// f(1) maximal and prod a >= prod b; valid for x <= sum b.
Certificate corollary2(const ComparisonInstance& inst);

// Smallest m such that all prefix log-ratio sums for j = m..n are >= 0;
// returns n+1 when even j = n fails (sentinel: not defined).
std::size_t n1_index(const ComparisonInstance& inst);

// For f nondecreasing: all-x when n1 = 1, else x <= G(n, a, b) with
// d = 1/b_{n1} - 1/a_{n1}.
Certificate theorem2(const ComparisonInstance& inst);

// Necessary condition for the all-x ordering: max a >= max b.
bool necessary_max(const ComparisonInstance& inst);

// --- aggregation -----------------------------------------------------------

struct Interval {
  double lo = 0.0, hi = 0.0;  // hi may be +inf
};

struct CertifyOptions {
  bool include_transform_candidates = false;  // prop1 over the chain's b'
  std::size_t pair_swap_max_n = 12;
};

struct CertificationReport {
  std::vector<Certificate> certificates;
  std::vector<Interval> region_union;  // disjoint, sorted
  bool max_possible = true;            // necessary_max outcome
  std::optional<double> x_query;
  enum class Verdict { Certified, Unknown, ImpossibleAllX };
  std::optional<Verdict> holds_at_x;
};

std::string_view verdict_name(CertificationReport::Verdict v);

/// Runs every rule, merges validity regions, and classifies the optional
/// query point. Throws InternalInconsistency if an all-x certificate fires
/// while the necessary condition max a >= max b fails.
CertificationReport certify_all(const ComparisonInstance& inst,
                                std::optional<double> x = std::nullopt,
                                const CertifyOptions& opts = {});

// Recomputes a certificate's region from its witnesses and the instance;
// the result must agree with the stored region (re-derivability contract).
Region recompute_region(const ComparisonInstance& inst, const Certificate& c);

std::vector<Interval> merge_regions(const std::vector<Certificate>& certs);
bool union_contains(const std::vector<Interval>& u, double x);

}  // namespace qfcert

#endif  // QFCERT_CERTIFICATES_HPP
