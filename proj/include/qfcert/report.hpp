#ifndef QFCERT_REPORT_HPP
#define QFCERT_REPORT_HPP

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qfcert/cdf.hpp"
#include "qfcert/certificates.hpp"

namespace qfcert {

/// Everything a certification run reports: inputs as given, canonical forms,
/// the per-rule certificates, the merged validity region, the optional query
/// verdict and an optional oracle spot check at the query point.
struct ReportDocument {
  std::vector<double> a_input, b_input;
  std::vector<double> a_canonical, b_canonical;
  CertificationReport cert;
  std::optional<std::pair<CdfEstimate, CdfEstimate>> oracle_spotcheck;
};

ReportDocument make_report(const std::vector<double>& a_raw,
                           const std::vector<double>& b_raw,
                           std::optional<double> x,
                           const CertifyOptions& opts = {});

std::string render_text(const ReportDocument& doc);
std::string render_json(const ReportDocument& doc);

}  // namespace qfcert

#endif  // QFCERT_REPORT_HPP
