// qfcert: certify pointwise CDF ordering between Gaussian quadratic forms
// and evaluate / verify the underlying weighted chi-square distributions.
//
// Exit codes: 0 certified (or plain success), 1 verify violation,
// 2 ordering unknown at the query point, 3 all-x ordering impossible,
// 5 tolerance unreachable, 64 usage error.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qfcert/cdf.hpp"
#include "qfcert/report.hpp"
#include "qfcert/verify.hpp"

namespace {

constexpr int kExitCertified = 0;
constexpr int kExitViolation = 1;
constexpr int kExitUnknown = 2;
constexpr int kExitImpossible = 3;
constexpr int kExitTolerance = 5;
constexpr int kExitUsage = 64;

std::vector<double> parse_vector(const std::string& text) {
  std::string payload = text;
  if (!text.empty() && text[0] == '@') {
    std::ifstream in(text.substr(1));
    if (!in) throw qfcert::Error("cannot open vector file: " + text.substr(1));
    std::stringstream ss;
    ss << in.rdbuf();
    payload = ss.str();
    for (auto& ch : payload)
      if (ch == '\n' || ch == '\t' || ch == ' ') ch = ',';
  }
  std::vector<double> out;
  std::stringstream ss(payload);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      throw qfcert::Error("cannot parse weight '" + item + "'");
    }
    if (used != item.size())
      throw qfcert::Error("cannot parse weight '" + item + "'");
    out.push_back(v);
  }
  if (out.empty()) throw qfcert::Error("empty weight vector");
  return out;
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

int cmd_certify(const std::string& a_text, const std::string& b_text,
                std::optional<double> x, bool oracle, bool json, double tol) {
  const auto a = parse_vector(a_text);
  const auto b = parse_vector(b_text);
  qfcert::CertifyOptions opts;
  opts.include_transform_candidates = true;
  qfcert::ReportDocument doc = qfcert::make_report(a, b, x, opts);
  if (oracle && x) {
    const auto wa = qfcert::WeightVector::from_raw(a);
    const auto wb = qfcert::WeightVector::from_raw(b);
    doc.oracle_spotcheck = {qfcert::beta_cdf_inversion(wa, *x, tol),
                            qfcert::beta_cdf_inversion(wb, *x, tol)};
  }
  std::cout << (json ? qfcert::render_json(doc) : qfcert::render_text(doc));
  if (!x) return kExitCertified;
  switch (*doc.cert.holds_at_x) {
    case qfcert::CertificationReport::Verdict::Certified: return kExitCertified;
    case qfcert::CertificationReport::Verdict::Unknown: return kExitUnknown;
    case qfcert::CertificationReport::Verdict::ImpossibleAllX:
      return kExitImpossible;
  }
  return kExitUnknown;
}

int cmd_cdf(const std::string& w_text, double x, const std::string& method,
            double tol, long long samples, std::uint64_t seed, bool json) {
  const auto w = qfcert::WeightVector::from_raw(parse_vector(w_text));
  qfcert::CdfEstimate est;
  if (method == "inversion") {
    est = qfcert::beta_cdf_inversion(w, x, tol);
  } else if (method == "mc") {
    est = qfcert::beta_cdf_mc(w, x, samples, seed);
  } else {
    throw CLI::ValidationError("--method must be 'inversion' or 'mc'");
  }
  if (json) {
    std::cout << "{\"value\": " << fmt(est.value)
              << ", \"error_bound\": " << fmt(est.error_bound)
              << ", \"method\": \""
              << (est.method == qfcert::Method::Inversion ? "inversion"
                                                          : "monte-carlo")
              << "\", \"x\": " << fmt(est.x);
    if (est.method == qfcert::Method::MonteCarlo)
      std::cout << ", \"n_samples\": " << est.n_samples
                << ", \"seed\": " << est.seed << ", \"k_sigma\": " << est.k_sigma;
    std::cout << "}\n";
  } else {
    std::cout << "beta(x, w) = " << fmt(est.value) << " +- "
              << fmt(est.error_bound) << "\n";
  }
  return kExitCertified;
}

int cmd_sweep(const std::string& a_text, const std::string& b_text,
              double x_min, double x_max, int steps, const std::string& out,
              double tol) {
  if (steps < 2) throw CLI::ValidationError("--steps must be >= 2");
  if (!(x_min > 0.0 && x_max > x_min))
    throw CLI::ValidationError("need 0 < x-min < x-max");
  const auto a = parse_vector(a_text);
  const auto b = parse_vector(b_text);
  const auto wa = qfcert::WeightVector::from_raw(a);
  const auto wb = qfcert::WeightVector::from_raw(b);
  const qfcert::ComparisonInstance inst = qfcert::build_instance(a, b);
  const qfcert::CertificationReport rep = qfcert::certify_all(inst);

  std::ofstream os(out);
  if (!os) {
    std::cerr << "error: cannot write " << out << "\n";
    return 1;
  }
  os << "x,beta_a,beta_b,err_a,err_b,certified_here,best_rule\n";
  for (int i = 0; i < steps; ++i) {
    const double x = x_min + (x_max - x_min) * i / (steps - 1);
    const auto ea = qfcert::beta_cdf_inversion(wa, x, tol);
    const auto eb = qfcert::beta_cdf_inversion(wb, x, tol);
    const bool certified = qfcert::union_contains(rep.region_union, x);
    std::string best = "none";
    if (certified) {
      // an all-x rule wins outright; otherwise the widest covering threshold
      double best_span = -1.0;
      for (const auto& c : rep.certificates) {
        if (!c.applicable || !c.region || !c.region->contains(x)) continue;
        if (c.region->kind == qfcert::Region::Kind::AllX) {
          best = rule_name(c.rule);
          break;
        }
        const double span = c.region->kind == qfcert::Region::Kind::AtMost
                                ? c.region->x_star
                                : 1.0 / c.region->x_star;
        if (span > best_span) {
          best_span = span;
          best = rule_name(c.rule);
        }
      }
    }
    os << fmt(x) << ',' << fmt(ea.value) << ',' << fmt(eb.value) << ','
       << fmt(ea.error_bound) << ',' << fmt(eb.error_bound) << ','
       << (certified ? 1 : 0) << ',' << best << "\n";
  }
  return kExitCertified;
}

int cmd_verify(long long trials, std::size_t n, std::uint64_t seed,
               long long samples) {
  qfcert::VerifyOptions opts;
  opts.trials = trials;
  opts.n_max = n;
  opts.seed = seed;
  opts.samples = samples;
  const qfcert::VerifySummary sum = qfcert::run_verification(opts);
  std::cout << qfcert::render_summary(sum);
  return sum.total_violations == 0 ? kExitCertified : kExitViolation;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "qfcert: ordering certificates and CDF evaluation for Gaussian "
      "quadratic forms sum_i w_i xi_i^2"};
  app.require_subcommand(1);

  std::string a_text, b_text, w_text, method = "inversion", out_path;
  std::optional<double> x_opt;
  double x = 0.0, tol = 1e-8, x_min = 0.0, x_max = 0.0;
  long long samples = 1000000, trials = 200;
  std::uint64_t seed = 42;
  std::size_t nmax = 6;
  int steps = 30;
  bool oracle = false, json = false;

  auto* certify = app.add_subcommand(
      "certify", "Run every certificate rule on a pair (a, b)");
  certify->add_option("--a", a_text, "weights a (comma separated, or @file)")
      ->required();
  certify->add_option("--b", b_text, "weights b (comma separated, or @file)")
      ->required();
  certify->add_option("--x", x_opt, "query point: is beta(x,a) <= beta(x,b)?");
  certify->add_flag("--oracle", oracle,
                    "add an inversion oracle spot check at --x");
  certify->add_flag("--json", json, "emit a JSON report");
  certify->add_option("--tol", tol, "oracle tolerance (default 1e-8)");

  auto* cdf = app.add_subcommand("cdf", "Evaluate beta(x, w)");
  cdf->add_option("--w", w_text, "weights (comma separated, or @file)")
      ->required();
  cdf->add_option("--x", x, "evaluation point")->required();
  cdf->add_option("--method", method, "inversion (default) or mc");
  cdf->add_option("--tol", tol, "inversion tolerance (default 1e-8)");
  cdf->add_option("--samples", samples, "Monte Carlo samples (default 1e6)");
  cdf->add_option("--seed", seed, "Monte Carlo seed (default 42)");
  cdf->add_flag("--json", json, "emit JSON");

  auto* sweep = app.add_subcommand(
      "sweep", "Tabulate beta(x,a), beta(x,b) and certification over an x grid");
  sweep->add_option("--a", a_text)->required();
  sweep->add_option("--b", b_text)->required();
  sweep->add_option("--x-min", x_min)->required();
  sweep->add_option("--x-max", x_max)->required();
  sweep->add_option("--steps", steps, "grid size (default 30)");
  sweep->add_option("--out", out_path, "output CSV path")->required();
  sweep->add_option("--tol", tol, "inversion tolerance (default 1e-8)");

  auto* verify = app.add_subcommand(
      "verify", "Random soundness campaign: certificates vs the MC oracle");
  verify->add_option("--trials", trials, "number of random instances");
  verify->add_option("--n", nmax, "max dimension (drawn uniformly in [2, n])");
  verify->add_option("--seed", seed, "campaign seed");
  verify->add_option("--samples", samples, "MC samples per CDF evaluation");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (certify->parsed())
      return cmd_certify(a_text, b_text, x_opt, oracle, json, tol);
    if (cdf->parsed())
      return cmd_cdf(w_text, x, method, tol, samples, seed, json);
    if (sweep->parsed())
      return cmd_sweep(a_text, b_text, x_min, x_max, steps, out_path, tol);
    if (verify->parsed()) return cmd_verify(trials, nmax, seed, samples);
  } catch (const qfcert::ToleranceUnreachable& e) {
    std::cerr << "error: " << e.what()
              << " (best bound " << fmt(e.best.error_bound) << ")\n";
    return kExitTolerance;
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const qfcert::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 70;
  }
  return kExitUsage;
}
