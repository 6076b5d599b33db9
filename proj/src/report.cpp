#include "qfcert/report.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include <json.hpp>

namespace qfcert {
namespace {

using nlohmann::json;

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

json region_to_json(const Region& r) {
  json j;
  switch (r.kind) {
    case Region::Kind::AllX: j["kind"] = "all_x"; break;
    case Region::Kind::AtMost:
      j["kind"] = "at_most";
      j["x_star"] = r.x_star;
      break;
    case Region::Kind::AtLeast:
      j["kind"] = "at_least";
      j["x_star"] = r.x_star;
      break;
  }
  return j;
}

std::string region_to_text(const Region& r) {
  switch (r.kind) {
    case Region::Kind::AllX: return "all x";
    case Region::Kind::AtMost: return "x <= " + fmt(r.x_star);
    case Region::Kind::AtLeast: return "x >= " + fmt(r.x_star);
  }
  return "?";
}

json estimate_to_json(const CdfEstimate& e) {
  json j;
  j["value"] = e.value;
  j["error_bound"] = e.error_bound;
  j["method"] = e.method == Method::Inversion ? "inversion" : "monte-carlo";
  j["x"] = e.x;
  if (e.method == Method::MonteCarlo) {
    j["n_samples"] = e.n_samples;
    j["seed"] = e.seed;
    j["k_sigma"] = e.k_sigma;
  }
  return j;
}

}  // namespace

ReportDocument make_report(const std::vector<double>& a_raw,
                           const std::vector<double>& b_raw,
                           std::optional<double> x,
                           const CertifyOptions& opts) {
  ReportDocument doc;
  doc.a_input = a_raw;
  doc.b_input = b_raw;
  const ComparisonInstance inst = build_instance(a_raw, b_raw);
  doc.a_canonical = inst.a().weights();
  doc.b_canonical = inst.b().weights();
  doc.cert = certify_all(inst, x, opts);
  return doc;
}

std::string render_text(const ReportDocument& doc) {
  std::ostringstream os;
  auto vec = [&](const std::vector<double>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i)
      s += (i ? "," : "") + fmt(v[i]);
    return s;
  };
  os << "a = " << vec(doc.a_input) << "  (canonical " << vec(doc.a_canonical)
     << ")\n";
  os << "b = " << vec(doc.b_input) << "  (canonical " << vec(doc.b_canonical)
     << ")\n";
  os << "necessary condition max a >= max b: "
     << (doc.cert.max_possible ? "holds" : "FAILS (no all-x ordering possible)")
     << "\n";
  os << "certificates:\n";
  for (const auto& c : doc.cert.certificates) {
    char line[256];
    std::snprintf(line, sizeof line, "  %-18s %-14s", rule_name(c.rule).data(),
                  c.applicable ? "applicable" : "not applicable");
    os << line;
    if (c.applicable && c.region) os << " " << region_to_text(*c.region);
    if (!c.detail.empty()) os << "  [" << c.detail << "]";
    os << "\n";
  }
  os << "certified region:";
  if (doc.cert.region_union.empty()) {
    os << " (empty)";
  } else {
    for (const auto& iv : doc.cert.region_union) {
      os << " (0 < x";
      if (iv.lo > 0.0) os << ", x >= " + fmt(iv.lo);
      if (std::isfinite(iv.hi)) os << ", x <= " + fmt(iv.hi);
      os << ")";
    }
  }
  os << "\n";
  if (doc.cert.x_query) {
    os << "query x = " << fmt(*doc.cert.x_query) << ": "
       << verdict_name(*doc.cert.holds_at_x) << "\n";
  }
  if (doc.oracle_spotcheck) {
    const auto& [ea, eb] = *doc.oracle_spotcheck;
    os << "oracle: beta(x,a) = " << fmt(ea.value) << " +- "
       << fmt(ea.error_bound) << ", beta(x,b) = " << fmt(eb.value) << " +- "
       << fmt(eb.error_bound) << "\n";
  }
  return os.str();
}

std::string render_json(const ReportDocument& doc) {
  json j;
  j["a"] = doc.a_input;
  j["b"] = doc.b_input;
  j["a_canonical"] = doc.a_canonical;
  j["b_canonical"] = doc.b_canonical;
  j["max_possible"] = doc.cert.max_possible;
  j["certificates"] = json::array();
  for (const auto& c : doc.cert.certificates) {
    json jc;
    jc["rule"] = rule_name(c.rule);
    jc["applicable"] = c.applicable;
    if (c.region) jc["region"] = region_to_json(*c.region);
    if (!c.witness.empty()) jc["witness"] = c.witness;
    if (!c.blocks.empty()) jc["blocks"] = c.blocks;
    if (!c.aux_c.empty()) jc["aux_c"] = c.aux_c;
    if (!c.aux_d.empty()) jc["aux_d"] = c.aux_d;
    if (!c.detail.empty()) jc["detail"] = c.detail;
    j["certificates"].push_back(std::move(jc));
  }
  j["region_union"] = json::array();
  for (const auto& iv : doc.cert.region_union) {
    json ji;
    ji["lo"] = iv.lo;
    if (std::isfinite(iv.hi))
      ji["hi"] = iv.hi;
    else
      ji["hi"] = "inf";
    j["region_union"].push_back(std::move(ji));
  }
  if (doc.cert.x_query) {
    j["x_query"] = *doc.cert.x_query;
    j["holds_at_x"] = verdict_name(*doc.cert.holds_at_x);
  }
  if (doc.oracle_spotcheck) {
    j["oracle_spotcheck"] = {
        {"a", estimate_to_json(doc.oracle_spotcheck->first)},
        {"b", estimate_to_json(doc.oracle_spotcheck->second)}};
  }
  return j.dump(2) + "\n";
}

}  // namespace qfcert
