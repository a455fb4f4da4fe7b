#include "chebmel/report.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace chebmel {

using ordered_json = nlohmann::ordered_json;

ReportFormat report_format_from_string(const std::string& s) {
  if (s == "json") return ReportFormat::json;
  if (s == "csv") return ReportFormat::csv;
  if (s == "text") return ReportFormat::text;
  throw UsageError("unknown report format: " + s);
}

std::string format_double17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

namespace {

ordered_json meta_json(const ReportMeta& meta) {
  ordered_json j;
  j["tool_version"] = meta.tool_version;
  j["case"] = meta.case_id;
  j["seed"] = meta.seed;
  j["tol"] = meta.tol;
  j["grid"] = meta.grid;
  return j;
}

ordered_json witness_json(const Witness& w) {
  ordered_json j;
  j["point"] = w.point;
  j["value"] = w.value;
  return j;
}

ordered_json certificate_json(const SignCertificate& c) {
  ordered_json j;
  j["verdict"] = to_string(c.verdict);
  j["grid_points"] = c.grid_points;
  j["min_abs"] = c.min_abs;
  j["sign"] = c.sign;
  j["threshold"] = c.threshold;
  j["scale"] = c.scale;
  j["seed"] = c.seed;
  ordered_json ws = ordered_json::array();
  for (const auto& w : c.witnesses) ws.push_back(witness_json(w));
  j["witnesses"] = ws;
  j["note"] = c.note;
  return j;
}

std::string certificate_text(const SignCertificate& c, const std::string& tag) {
  std::ostringstream out;
  out << tag << ": " << to_string(c.verdict);
  if (c.verdict == Verdict::pass) out << " sign=" << (c.sign > 0 ? "+1" : "-1");
  out << " samples=" << c.grid_points
      << " min_abs=" << format_double17(c.min_abs)
      << " threshold=" << format_double17(c.threshold);
  for (const auto& w : c.witnesses) {
    out << "\n  witness value=" << format_double17(w.value) << " at (";
    for (std::size_t i = 0; i < w.point.size(); ++i) {
      if (i) out << ", ";
      out << format_double17(w.point[i]);
    }
    out << ")";
  }
  return out.str();
}

std::string dump(const ordered_json& j) { return j.dump(2) + "\n"; }

}  // namespace

std::string render_cheb_certificate(const ChebCertificate& cert,
                                    const std::vector<std::string>& labels,
                                    const ReportMeta& meta, ReportFormat fmt) {
  if (fmt == ReportFormat::json) {
    ordered_json j;
    j["meta"] = meta_json(meta);
    j["verdict"] = to_string(cert.verdict());
    j["labels"] = labels;
    ordered_json ps = ordered_json::array();
    for (const auto& p : cert.prefixes) ps.push_back(certificate_json(p));
    j["prefixes"] = ps;
    return dump(j);
  }
  if (fmt == ReportFormat::csv) {
    std::ostringstream out;
    out << "prefix,verdict,sign,min_abs,threshold,samples\n";
    for (std::size_t k = 0; k < cert.prefixes.size(); ++k) {
      const auto& c = cert.prefixes[k];
      out << k << ',' << to_string(c.verdict) << ',' << c.sign << ','
          << format_double17(c.min_abs) << ',' << format_double17(c.threshold)
          << ',' << c.grid_points << '\n';
    }
    return out.str();
  }
  std::ostringstream out;
  out << "case " << meta.case_id << " (seed " << meta.seed << ")\n";
  out << "verdict: " << to_string(cert.verdict()) << "\n";
  for (std::size_t k = 0; k < cert.prefixes.size(); ++k)
    out << certificate_text(cert.prefixes[k], "prefix " + std::to_string(k))
        << "\n";
  return out.str();
}

std::string render_hypothesis_report(const HypothesisHReport& report,
                                     const ReportMeta& meta,
                                     ReportFormat fmt) {
  if (fmt == ReportFormat::json) {
    ordered_json j;
    j["meta"] = meta_json(meta);
    j["verdict"] = to_string(report.verdict());
    ordered_json ps = ordered_json::array();
    for (const auto& [prefix, cert] : report.prefixes) {
      ordered_json p;
      p["s"] = prefix.s;
      p["k"] = prefix.k;
      p["certificate"] = certificate_json(cert);
      ps.push_back(p);
    }
    j["prefixes"] = ps;
    return dump(j);
  }
  std::ostringstream out;
  out << "case " << meta.case_id << " verdict " << to_string(report.verdict())
      << "\n";
  for (const auto& [prefix, cert] : report.prefixes) {
    std::ostringstream tag;
    tag << "prefix s=" << prefix.s << " k=(";
    for (std::size_t i = 0; i < prefix.k.size(); ++i) {
      if (i) tag << ",";
      tag << prefix.k[i];
    }
    tag << ")";
    out << certificate_text(cert, tag.str()) << "\n";
  }
  return out.str();
}

std::string render_zero_report(const ZeroReport& report, const ReportMeta& meta,
                               ReportFormat fmt) {
  if (fmt == ReportFormat::csv) {
    std::ostringstream out;
    out << "location,multiplicity,residual\n";
    for (const auto& z : report.zeros)
      out << format_double17(z.location) << ',' << z.multiplicity << ','
          << format_double17(z.residual) << '\n';
    return out.str();
  }
  if (fmt == ReportFormat::json) {
    ordered_json j;
    j["meta"] = meta_json(meta);
    j["scan_resolution"] = report.scan_resolution;
    j["total_with_multiplicity"] = report.total_with_multiplicity;
    ordered_json zs = ordered_json::array();
    for (const auto& z : report.zeros) {
      ordered_json zj;
      zj["location"] = z.location;
      zj["multiplicity"] = z.multiplicity;
      zj["bracket"] = {z.bracket_lo, z.bracket_hi};
      zj["residual"] = z.residual;
      zj["confident"] = z.confident;
      zs.push_back(zj);
    }
    j["zeros"] = zs;
    return dump(j);
  }
  std::ostringstream out;
  out << "case " << meta.case_id << ": " << report.total_with_multiplicity
      << " zero(s) with multiplicity at resolution " << report.scan_resolution
      << "\n";
  for (const auto& z : report.zeros) {
    out << "  x=" << format_double17(z.location) << " mult=" << z.multiplicity
        << (z.confident ? "" : " (unconfirmed)")
        << " residual=" << format_double17(z.residual) << "\n";
  }
  return out.str();
}

std::string render_prop8_report(const Prop8Report& report,
                                const ReportMeta& meta, ReportFormat fmt) {
  if (fmt == ReportFormat::json) {
    ordered_json j;
    j["meta"] = meta_json(meta);
    j["case"] = to_string(report.case_id);
    j["m"] = report.m;
    j["bound"] = report.bound;
    j["realized_count"] = report.realized_count;
    j["max_random_count"] = report.max_random_count;
    j["trials"] = report.trials;
    j["seed"] = report.seed;
    j["card_theta"] = report.card_theta;
    ordered_json zs = ordered_json::array();
    for (const auto& z : report.realization.zeros) {
      ordered_json zj;
      zj["location"] = z.location;
      zj["multiplicity"] = z.multiplicity;
      zs.push_back(zj);
    }
    j["realized_zeros"] = zs;
    return dump(j);
  }
  std::ostringstream out;
  out << "case " << to_string(report.case_id) << " m=" << report.m
      << ": bound=" << report.bound;
  if (report.realized_count >= 0) out << " realized=" << report.realized_count;
  out << " max_random_count=" << report.max_random_count << " (trials "
      << report.trials << ", seed " << report.seed
      << ", card_theta=" << report.card_theta << ")\n";
  return out.str();
}

std::string render_sweep(const std::vector<SweepRow>& rows,
                         const ReportMeta& meta, ReportFormat fmt) {
  const bool with_dm1 =
      !rows.empty() && rows.front().dm1.has_value();
  if (fmt == ReportFormat::csv) {
    std::ostringstream out;
    out << (with_dm1 ? "rho,M1,dM1\n" : "rho,M1\n");
    for (const auto& r : rows) {
      out << format_double17(r.rho) << ',' << format_double17(r.m1);
      if (with_dm1) out << ',' << format_double17(r.dm1.value_or(0.0));
      out << '\n';
    }
    return out.str();
  }
  if (fmt == ReportFormat::json) {
    ordered_json j;
    j["meta"] = meta_json(meta);
    ordered_json arr = ordered_json::array();
    for (const auto& r : rows) {
      ordered_json row;
      row["rho"] = r.rho;
      row["M1"] = r.m1;
      if (r.dm1) row["dM1"] = *r.dm1;
      arr.push_back(row);
    }
    j["sweep"] = arr;
    return dump(j);
  }
  std::ostringstream out;
  out << "case " << meta.case_id << " sweep (" << rows.size() << " points)\n";
  for (const auto& r : rows) {
    out << "  rho=" << format_double17(r.rho) << " M1=" << format_double17(r.m1);
    if (r.dm1) out << " dM1=" << format_double17(*r.dm1);
    out << "\n";
  }
  return out.str();
}

std::string render_realize_report(const RealizeReport& report,
                                  const ReportMeta& meta, ReportFormat fmt) {
  if (fmt == ReportFormat::json) {
    ordered_json j;
    j["meta"] = meta_json(meta);
    j["labels"] = report.labels;
    j["coefficients"] = report.coefficients;
    j["zero_count"] = report.zeros.total_with_multiplicity;
    ordered_json zs = ordered_json::array();
    for (const auto& z : report.zeros.zeros) {
      ordered_json zj;
      zj["location"] = z.location;
      zj["multiplicity"] = z.multiplicity;
      zj["residual"] = z.residual;
      zs.push_back(zj);
    }
    j["zeros"] = zs;
    return dump(j);
  }
  if (fmt == ReportFormat::csv) {
    std::ostringstream out;
    out << "label,coefficient\n";
    for (std::size_t i = 0; i < report.coefficients.size(); ++i)
      out << report.labels[i] << ',' << format_double17(report.coefficients[i])
          << '\n';
    return out.str();
  }
  std::ostringstream out;
  out << "case " << meta.case_id << " combination:\n";
  for (std::size_t i = 0; i < report.coefficients.size(); ++i)
    out << "  " << report.labels[i] << ": "
        << format_double17(report.coefficients[i]) << "\n";
  out << "zeros found: " << report.zeros.total_with_multiplicity << "\n";
  return out.str();
}

std::string certificate_to_json(const SignCertificate& cert) {
  return dump(certificate_json(cert));
}

SignCertificate certificate_from_json(const std::string& text) {
  ordered_json j;
  try {
    j = ordered_json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw UsageError(std::string("certificate parse error: ") + e.what());
  }
  SignCertificate c;
  const std::string v = j.at("verdict").get<std::string>();
  if (v == "pass")
    c.verdict = Verdict::pass;
  else if (v == "fail")
    c.verdict = Verdict::fail;
  else
    c.verdict = Verdict::inconclusive;
  c.grid_points = j.at("grid_points").get<long>();
  c.min_abs = j.at("min_abs").get<double>();
  c.sign = j.at("sign").get<int>();
  c.threshold = j.at("threshold").get<double>();
  c.scale = j.at("scale").get<double>();
  c.seed = j.at("seed").get<std::uint64_t>();
  for (const auto& wj : j.at("witnesses")) {
    Witness w;
    w.point = wj.at("point").get<std::vector<double>>();
    w.value = wj.at("value").get<double>();
    c.witnesses.push_back(std::move(w));
  }
  c.note = j.at("note").get<std::string>();
  return c;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open output file: " + path);
  out << content;
  if (!out) throw Error("write failed: " + path);
}

}  // namespace chebmel
