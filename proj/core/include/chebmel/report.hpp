#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "chebmel/melnikov.hpp"
#include "chebmel/verify.hpp"
#include "chebmel/zeros.hpp"

namespace chebmel {

enum class ReportFormat { json, csv, text };

ReportFormat report_format_from_string(const std::string& s);

/// Context stamped into every report: version, the case identifier, and the
/// reproducibility knobs.
struct ReportMeta {
  std::string tool_version;
  std::string case_id;
  std::uint64_t seed = 0;
  double tol = 0.0;
  int grid = 0;
};

/// 17 significant digits, used by the csv and text renderers.
std::string format_double17(double x);

std::string render_cheb_certificate(const ChebCertificate& cert,
                                    const std::vector<std::string>& labels,
                                    const ReportMeta& meta, ReportFormat fmt);

std::string render_hypothesis_report(const HypothesisHReport& report,
                                     const ReportMeta& meta, ReportFormat fmt);

/// Zero reports serialize to csv with the header
/// `location,multiplicity,residual` (plus json/text renderings).
std::string render_zero_report(const ZeroReport& report, const ReportMeta& meta,
                               ReportFormat fmt);

std::string render_prop8_report(const Prop8Report& report,
                                const ReportMeta& meta, ReportFormat fmt);

struct SweepRow {
  double rho = 0.0;
  double m1 = 0.0;
  std::optional<double> dm1;
};

/// CSV schema `rho,M1` plus a `dM1` column when any row carries one.
std::string render_sweep(const std::vector<SweepRow>& rows,
                         const ReportMeta& meta, ReportFormat fmt);

struct RealizeReport {
  std::vector<std::string> labels;
  std::vector<double> coefficients;
  ZeroReport zeros;
};

std::string render_realize_report(const RealizeReport& report,
                                  const ReportMeta& meta, ReportFormat fmt);

/// Single-certificate round-trip helpers (json only).
std::string certificate_to_json(const SignCertificate& cert);
SignCertificate certificate_from_json(const std::string& text);

void write_file(const std::string& path, const std::string& content);

}  // namespace chebmel
