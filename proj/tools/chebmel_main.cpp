#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "chebmel/families.hpp"
#include "chebmel/melnikov.hpp"
#include "chebmel/parallel.hpp"
#include "chebmel/report.hpp"
#include "chebmel/suites.hpp"
#include "chebmel/verify.hpp"
#include "chebmel/version.hpp"
#include "chebmel/zeros.hpp"

namespace {

using namespace chebmel;

constexpr int kExitPass = 0;
constexpr int kExitVerificationFailure = 1;
constexpr int kExitUsage = 2;
constexpr int kExitNonConvergence = 3;

struct CommonOptions {
  std::string config_path;
  std::string out_path;
  std::string format = "text";
  std::uint64_t seed = 20240817;
  double tol = 1e-10;
  int grid = 512;
  unsigned jobs = 0;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot open config file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void emit(const CommonOptions& opt, const std::string& content) {
  if (opt.out_path.empty()) {
    std::cout << content;
    return;
  }
  write_file(opt.out_path, content);
}

ReportMeta make_meta(const CommonOptions& opt, const std::string& case_id) {
  ReportMeta meta;
  meta.tool_version = kVersion;
  meta.case_id = case_id;
  meta.seed = opt.seed;
  meta.tol = opt.tol;
  meta.grid = opt.grid;
  return meta;
}

void apply_jobs(const CommonOptions& opt) {
  unsigned jobs = opt.jobs;
  if (const char* env = std::getenv("CHEB_JOBS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v > 0) jobs = static_cast<unsigned>(v);  // CHEB_JOBS overrides --jobs
  }
  set_default_jobs(jobs);
}

std::vector<double> parse_list(const std::string& csv) {
  std::vector<double> out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    out.push_back(std::stod(item));
  }
  return out;
}

nlohmann::json parse_json(const std::string& text, const char* what) {
  try {
    return nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw UsageError(std::string(what) + " is not valid JSON: " + e.what());
  }
}

System9Model load_system9(const nlohmann::json& j) {
  System9Model model;
  model.m = j.at("m").get<int>();
  model.lambda_hat = j.at("lambda_hat").get<std::vector<double>>();
  model.validate();
  return model;
}

PiecewiseRadialModel load_system10(const nlohmann::json& j) {
  PiecewiseRadialModel model;
  model.m = j.at("m").get<int>();
  model.a = j.at("a").get<double>();
  model.radials = j.at("radials").get<std::vector<double>>();
  for (const auto& sector : j.at("mu")) {
    SectorCoeffs sc;
    sc.c = sector.at("c").get<std::vector<double>>();
    sc.d = sector.at("d").get<std::vector<double>>();
    model.mu.push_back(std::move(sc));
  }
  model.validate();
  return model;
}

BivariatePoly load_poly(const nlohmann::json& j) {
  BivariatePoly p;
  p.coef = j.get<std::vector<std::vector<double>>>();
  return p;
}

System11Model load_system11(const nlohmann::json& j) {
  System11Model model;
  model.a = j.at("a").get<std::vector<double>>();
  model.b = j.at("b").get<std::vector<double>>();
  model.m = j.at("m").get<int>();
  model.P = load_poly(j.at("P"));
  model.Q = load_poly(j.at("Q"));
  model.validate();
  return model;
}

int run_verify(const CommonOptions& opt, bool ect) {
  const ParsedFamily parsed = parse_family(read_file(opt.config_path));
  const std::string cmd = ect ? "verify-ect" : "verify-ct";
  const ChebCertificate cert =
      ect ? check_ect(parsed.family, opt.grid)
          : check_ct(parsed.family, opt.grid, opt.seed);
  const ReportMeta meta = make_meta(opt, cmd + ":" + parsed.id);
  emit(opt, render_cheb_certificate(cert, parsed.family.labels(), meta,
                                    report_format_from_string(opt.format)));
  return cert.verdict() == Verdict::pass ? kExitPass : kExitVerificationFailure;
}

int run_wronskian(const CommonOptions& opt, double at, const std::string& nodes,
                  bool discrete) {
  const ParsedFamily parsed = parse_family(read_file(opt.config_path));
  const ReportMeta meta = make_meta(opt, "wronskian:" + parsed.id);
  std::ostringstream out;
  out << "case " << meta.case_id << "\n";
  if (discrete) {
    const std::vector<double> ts = parse_list(nodes);
    const double w = wronskian_discrete(parsed.family, ts);
    out << "discrete_wronskian = " << format_double17(w) << "\n";
  } else {
    for (int k = 0; k < parsed.family.size(); ++k)
      out << "W[0.." << k << "](" << format_double17(at) << ") = "
          << format_double17(wronskian_continuous(parsed.family.prefix(k), at))
          << "\n";
  }
  emit(opt, out.str());
  return kExitPass;
}

int run_melnikov(const CommonOptions& opt, int system, double rho, int sweep_n,
                 double rho_min, double rho_max, bool with_dm1) {
  const nlohmann::json doc = parse_json(read_file(opt.config_path), "model");
  SmoothFn m1;
  double lo = rho_min, hi = rho_max;
  const std::string case_id = "melnikov:system" + std::to_string(system);
  if (system == 9) {
    const System9Model model = load_system9(doc);
    m1 = m1_system9_fn(model, System9Path::direct, opt.tol);
    if (lo <= 0) lo = 0.01;
    if (hi <= 0) hi = 0.99;
  } else if (system == 10) {
    const PiecewiseRadialModel model = load_system10(doc);
    m1 = m1_system10_fn(model, opt.tol);
    if (lo <= 0) lo = 0.02 * model.rho_max();
    if (hi <= 0) hi = 0.98 * model.rho_max();
  } else if (system == 11) {
    const System11Model model = load_system11(doc);
    m1 = m1_system11_fn(model, opt.tol);
    if (lo <= 0) lo = 0.02 * model.rho_max();
    if (hi <= 0) hi = 0.98 * model.rho_max();
  } else {
    throw UsageError("melnikov --system must be 9, 10 or 11");
  }

  const ReportMeta meta = make_meta(opt, case_id);
  auto eval_row = [&](double r) {
    SweepRow row;
    row.rho = r;
    if (with_dm1) {
      const Jet j = m1.jet_at(r, 1);
      row.m1 = j.value();
      row.dm1 = j.derivative(1);
    } else {
      row.m1 = m1(r);
    }
    return row;
  };

  std::vector<SweepRow> rows;
  if (sweep_n > 0) {
    rows.resize(static_cast<std::size_t>(sweep_n));
    parallel_for(rows.size(), [&](std::size_t i) {
      rows[i] = eval_row(lo + (hi - lo) * static_cast<double>(i) /
                                  std::max(1, sweep_n - 1));
    });
  } else {
    rows.push_back(eval_row(rho));
  }
  emit(opt, render_sweep(rows, meta, report_format_from_string(opt.format)));
  return kExitPass;
}

int run_prop8(const CommonOptions& opt, const std::string& case_name, int m,
              const std::string& radials_csv, int trials) {
  const Prop8Case c = prop8_case_from_string(case_name);
  std::vector<double> radials;
  const std::vector<double>* radials_ptr = nullptr;
  if (!radials_csv.empty()) {
    radials = parse_list(radials_csv);
    radials_ptr = &radials;
  }
  const Prop8Report report = prop8_analyze(c, m, radials_ptr, trials, opt.seed);
  const ReportMeta meta =
      make_meta(opt, "prop8:case-" + case_name + ":m" + std::to_string(m));
  emit(opt,
       render_prop8_report(report, meta, report_format_from_string(opt.format)));
  const bool realized_ok =
      report.realized_count < 0 || report.realized_count == report.bound;
  const bool draws_ok = report.max_random_count <= report.bound;
  return realized_ok && draws_ok ? kExitPass : kExitVerificationFailure;
}

int run_realize(const CommonOptions& opt, const std::string& targets_csv) {
  const ParsedFamily parsed = parse_family(read_file(opt.config_path));
  const std::vector<double> targets = parse_list(targets_csv);
  const std::vector<double> coeffs = realize_zeros(parsed.family, targets);
  const SmoothFn combo =
      fn::linear_combination(parsed.family.members(), coeffs);
  ZeroReport zeros =
      count_zeros(combo, parsed.family.domain(), kDefaultScanResolution);
  RealizeReport report{parsed.family.labels(), coeffs, zeros};
  const ReportMeta meta = make_meta(opt, "realize:" + parsed.id);
  emit(opt, render_realize_report(report, meta,
                                  report_format_from_string(opt.format)));
  const bool ok =
      zeros.total_with_multiplicity == static_cast<int>(targets.size());
  return ok ? kExitPass : kExitVerificationFailure;
}

int run_identities(const CommonOptions& opt, const std::string& suite) {
  const SuiteResult result = run_identity_suite(suite, opt.seed);
  std::ostringstream out;
  out << "suite " << result.suite << ": " << (result.pass ? "pass" : "FAIL")
      << " (worst ratio " << format_double17(result.worst_ratio) << ", seed "
      << opt.seed << ")\n";
  for (const auto& c : result.cases)
    if (!c.pass)
      out << "  FAIL " << c.name << ": " << format_double17(c.value) << " > "
          << format_double17(c.allowed) << "\n";
  emit(opt, out.str());
  return result.pass ? kExitPass : kExitVerificationFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Chebyshev-system certification and Melnikov zero counting"};
  app.require_subcommand(1);

  CommonOptions opt;
  app.add_option("--out", opt.out_path, "Output file (default stdout)");
  app.add_option("--format", opt.format, "json|csv|text")
      ->check(CLI::IsMember({"json", "csv", "text"}));
  app.add_option("--seed", opt.seed, "Random seed recorded in reports");
  app.add_option("--tol", opt.tol, "Numeric tolerance");
  app.add_option("--grid", opt.grid, "Grid / tuple sample count");
  app.add_option("--jobs", opt.jobs, "Worker threads (0 = hardware)");

  auto* ect = app.add_subcommand(
      "verify-ect", "Sign-certify the prefix continuous Wronskians");
  ect->add_option("--config", opt.config_path, "Family spec JSON")->required();

  auto* ct = app.add_subcommand(
      "verify-ct", "Sign-certify the prefix discrete Wronskians");
  ct->add_option("--config", opt.config_path, "Family spec JSON")->required();

  auto* wron = app.add_subcommand("wronskian", "Evaluate family Wronskians");
  double at = 0.5;
  std::string nodes;
  wron->add_option("--config", opt.config_path, "Family spec JSON")->required();
  wron->add_option("--at", at, "Evaluation point for continuous Wronskians");
  wron->add_option("--nodes", nodes, "Comma list: discrete Wronskian nodes");

  auto* mel = app.add_subcommand("melnikov", "Evaluate or sweep M1");
  int system = 9, sweep_n = 0;
  double rho = 0.5, rho_min = -1.0, rho_max = -1.0;
  bool with_dm1 = false;
  mel->add_option("--system", system, "9, 10 or 11")->required();
  mel->add_option("--config", opt.config_path, "Model JSON")->required();
  mel->add_option("--rho", rho, "Single evaluation point");
  mel->add_option("--sweep", sweep_n, "Sweep sample count (csv rho,M1)");
  mel->add_option("--rho-min", rho_min, "Sweep start");
  mel->add_option("--rho-max", rho_max, "Sweep end");
  mel->add_flag("--dm1", with_dm1, "Include the jet derivative column");

  auto* p8 = app.add_subcommand(
      "prop8", "Bound / realize / sample the piecewise radial zero counts");
  std::string case_name = "i", radials_csv;
  int p8_m = 1, trials = 200;
  p8->add_option("--case", case_name, "i|ii|iii|iv|v|vi")->required();
  p8->add_option("--m", p8_m, "Perturbation degree")->required();
  p8->add_option("--radials", radials_csv, "Comma list of radial angles");
  p8->add_option("--trials", trials, "Random coefficient draws");

  auto* real = app.add_subcommand(
      "realize", "Construct a combination with prescribed simple zeros");
  std::string targets_csv;
  real->add_option("--config", opt.config_path, "Family spec JSON")->required();
  real->add_option("--targets", targets_csv, "Comma list of zero locations")
      ->required();

  auto* ident = app.add_subcommand("identities", "Run an identity suite");
  std::string suite;
  ident->add_option("--suite", suite, "Suite name")
      ->required()
      ->check(CLI::IsMember(chebmel::identity_suite_names()));

  for (auto* sub : {ect, ct, wron, mel, p8, real, ident}) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitPass : kExitUsage;
  }

  try {
    apply_jobs(opt);
    if (*ect) return run_verify(opt, true);
    if (*ct) return run_verify(opt, false);
    if (*wron) return run_wronskian(opt, at, nodes, !nodes.empty());
    if (*mel)
      return run_melnikov(opt, system, rho, sweep_n, rho_min, rho_max,
                          with_dm1);
    if (*p8) return run_prop8(opt, case_name, p8_m, radials_csv, trials);
    if (*real) return run_realize(opt, targets_csv);
    if (*ident) return run_identities(opt, suite);
    throw chebmel::UsageError("no subcommand selected");
  } catch (const chebmel::ConvergenceError& e) {
    std::cerr << "non-convergence: " << e.what() << "\n";
    return kExitNonConvergence;
  } catch (const chebmel::ResolutionError& e) {
    std::cerr << "non-convergence: " << e.what() << "\n";
    return kExitNonConvergence;
  } catch (const chebmel::UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const chebmel::ModelError& e) {
    std::cerr << "model error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const chebmel::DomainError& e) {
    std::cerr << "domain error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const chebmel::PoleError& e) {
    std::cerr << "domain error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const chebmel::Error& e) {
    std::cerr << "verification failure: " << e.what() << "\n";
    return kExitVerificationFailure;
  }
}
