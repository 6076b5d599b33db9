#include "qfcert/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>

#include "qfcert/cdf.hpp"
#include "qfcert/sampling.hpp"

namespace qfcert {
namespace {

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

std::vector<double> region_sample_points(const Region& region, double sum_b,
                                         int count) {
  std::vector<double> xs;
  xs.reserve(static_cast<std::size_t>(count));
  switch (region.kind) {
    case Region::Kind::AllX: {
      const double lo = 0.1 * sum_b, hi = 10.0 * sum_b;
      for (int i = 0; i < count; ++i)
        xs.push_back(lo * std::pow(hi / lo, count == 1
                                               ? 0.0
                                               : static_cast<double>(i) /
                                                     (count - 1)));
      break;
    }
    case Region::Kind::AtMost:
      for (int i = 1; i <= count; ++i)
        xs.push_back(region.x_star * static_cast<double>(i) / count);
      break;
    case Region::Kind::AtLeast: {
      const double lo = region.x_star;
      const double hi = std::max(10.0 * region.x_star, 10.0 * sum_b);
      for (int i = 0; i < count; ++i)
        xs.push_back(lo * std::pow(hi / lo, count == 1
                                               ? 0.0
                                               : static_cast<double>(i) /
                                                     (count - 1)));
      break;
    }
  }
  return xs;
}

VerifySummary run_verification(const VerifyOptions& opts) {
  VerifySummary sum;
  sum.opts = opts;
  sum.trials = opts.trials;
  for (Rule r : {Rule::Bakirov, Rule::Lemma1Dominance, Rule::Lemma1PairSwap,
                 Rule::Lemma1Partition, Rule::Prop1, Rule::Thm1, Rule::Cor1,
                 Rule::Cor2, Rule::Thm2})
    sum.by_rule[std::string(rule_name(r))] = RuleTally{};

  for (long long t = 0; t < opts.trials; ++t) {
    const std::uint64_t trial_seed = mix64(opts.seed, static_cast<std::uint64_t>(t));
    std::mt19937_64 eng(trial_seed);
    const std::size_t n =
        opts.n_max <= 2
            ? 2
            : 2 + static_cast<std::size_t>(uniform01(eng) * (opts.n_max - 1));
    const auto a = log_uniform_weights(n, mix64(trial_seed, 11));
    const auto b = log_uniform_weights(n, mix64(trial_seed, 22));
    const ComparisonInstance inst = build_instance(a, b);
    const CertificationReport rep = certify_all(inst);
    const double sum_b = inst.b().sum();

    // gather per-certificate sample points, dedup across certificates so one
    // Monte Carlo pass per side covers every threshold
    struct Check {
      const Certificate* cert;
      std::vector<double> xs;
    };
    std::vector<Check> checks;
    std::set<double> unique;
    for (const auto& c : rep.certificates) {
      if (!c.applicable || !c.region) continue;
      Check chk{&c, region_sample_points(*c.region, sum_b,
                                         opts.x_per_certificate)};
      unique.insert(chk.xs.begin(), chk.xs.end());
      checks.push_back(std::move(chk));
    }
    if (checks.empty()) continue;

    const std::vector<double> xs(unique.begin(), unique.end());
    const auto est_a =
        beta_cdf_mc_batch(inst.a(), xs, opts.samples, mix64(trial_seed, 1));
    const auto est_b =
        beta_cdf_mc_batch(inst.b(), xs, opts.samples, mix64(trial_seed, 2));
    std::map<double, std::pair<const CdfEstimate*, const CdfEstimate*>> at;
    for (std::size_t i = 0; i < xs.size(); ++i)
      at[xs[i]] = {&est_a[i], &est_b[i]};

    for (const auto& chk : checks) {
      auto& tally = sum.by_rule[std::string(rule_name(chk.cert->rule))];
      ++tally.certificates;
      ++sum.total_certificates;
      for (double x : chk.xs) {
        const auto [ea, eb] = at.at(x);
        const double sig_a = ea->error_bound / ea->k_sigma;
        const double sig_b = eb->error_bound / eb->k_sigma;
        const double margin = opts.sigmas * (sig_a + sig_b);
        ++tally.checks;
        ++sum.total_checks;
        if (ea->value - eb->value > margin) {
          ++tally.violations;
          ++sum.total_violations;
          sum.violation_lines.push_back(
              "trial " + std::to_string(t) + " rule " +
              std::string(rule_name(chk.cert->rule)) + " x=" + format_double(x) +
              " beta_a=" + format_double(ea->value) +
              " beta_b=" + format_double(eb->value) +
              " margin=" + format_double(margin));
        }
      }
    }
  }
  return sum;
}

std::string render_summary(const VerifySummary& s) {
  std::string out;
  out += "verify: trials=" + std::to_string(s.opts.trials) +
         " n_max=" + std::to_string(s.opts.n_max) +
         " seed=" + std::to_string(s.opts.seed) +
         " samples=" + std::to_string(s.opts.samples) +
         " x_per_certificate=" + std::to_string(s.opts.x_per_certificate) +
         " sigmas=" + format_double(s.opts.sigmas) + "\n";
  char line[128];
  std::snprintf(line, sizeof line, "%-20s %12s %12s %12s\n", "rule",
                "certificates", "checks", "violations");
  out += line;
  for (const auto& [name, tally] : s.by_rule) {
    std::snprintf(line, sizeof line, "%-20s %12lld %12lld %12lld\n",
                  name.c_str(), tally.certificates, tally.checks,
                  tally.violations);
    out += line;
  }
  std::snprintf(line, sizeof line, "%-20s %12lld %12lld %12lld\n", "total",
                s.total_certificates, s.total_checks, s.total_violations);
  out += line;
  for (const auto& v : s.violation_lines) out += "VIOLATION " + v + "\n";
  out += s.total_violations == 0 ? "result: PASS\n" : "result: FAIL\n";
  return out;
}

}  // namespace qfcert
