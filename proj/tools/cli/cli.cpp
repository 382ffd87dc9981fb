#include "cli.hpp"

#include <CLI11.hpp>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "ves/data_io.hpp"
#include "ves/error.hpp"
#include "ves/pipeline.hpp"
#include "ves/production.hpp"
#include "ves/serialize.hpp"

namespace vesprod {
namespace {

namespace fs = std::filesystem;

void report_error(std::ostream& err, const ves::Error& e) {
  err << "error[" << ves::to_string(e.code()) << "]: " << e.what() << '\n';
}

// Writes `content` to `path` through a temporary file and a rename; "-" is stdout.
void write_output(const std::string& path, const std::string& content, std::ostream& out) {
  if (path == "-") {
    out << content;
    return;
  }
  const fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw ves::Error(ves::ErrorCode::io, "cannot write '" + tmp.string() + "'");
    f << content;
    f.flush();
    if (!f) throw ves::Error(ves::ErrorCode::io, "write to '" + tmp.string() + "' failed");
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw ves::Error(ves::ErrorCode::io, "cannot move output into '" + path + "'");
  }
}

std::string optional_cell(const std::optional<double>& v) {
  return v ? ves::format_double(*v) : "NA";
}

std::vector<ves::ModelKind> parse_models(const std::vector<std::string>& names) {
  std::vector<ves::ModelKind> kinds;
  for (const std::string& n : names) {
    const ves::ModelSpec spec = ves::ModelSpec::parse(n);
    if (spec.needs_wage()) {
      throw ves::Error(ves::ErrorCode::usage, "--models takes polynomial, exponential or power");
    }
    if (std::find(kinds.begin(), kinds.end(), spec.kind) == kinds.end()) kinds.push_back(spec.kind);
  }
  if (kinds.empty()) throw ves::Error(ves::ErrorCode::usage, "--models is empty");
  return kinds;
}

void apply_column_overrides(const std::vector<std::string>& overrides, ves::ColumnMap& cm) {
  for (const std::string& o : overrides) {
    const auto eq = o.find('=');
    if (eq == std::string::npos) {
      throw ves::Error(ves::ErrorCode::usage, "--column expects field=header, got '" + o + "'");
    }
    const std::string key = o.substr(0, eq);
    const std::string header = o.substr(eq + 1);
    if (key == "industry_code") cm.industry_code = header;
    else if (key == "state") cm.state = header;
    else if (key == "year") cm.year = header;
    else if (key == "value_added") cm.value_added = header;
    else if (key == "workers") cm.workers = header;
    else if (key == "capital") cm.capital = header;
    else if (key == "wages") cm.wages = header;
    else if (key == "deflator") cm.deflator = header;
    else throw ves::Error(ves::ErrorCode::usage, "unknown column field '" + key + "'");
  }
}

std::string comparison_csv(const std::vector<ves::IndustryComparison>& rows) {
  std::ostringstream os;
  os << "industry_code,sigma_ces,mu_ves,reasonable,priority\n";
  for (const auto& c : rows) {
    os << ves::csv_field(c.industry_code) << ',' << optional_cell(c.sigma_ces) << ','
       << optional_cell(c.mu_ves) << ',' << (c.theoretically_reasonable ? "true" : "false") << ','
       << (c.priority ? "true" : "false") << '\n';
  }
  return os.str();
}

// ---- fit -------------------------------------------------------------------

struct FitFlags {
  std::string input;
  std::string out;
  std::string group_by = "industry_code";
  std::vector<std::string> models{"polynomial", "exponential", "power"};
  int max_degree = 4;
  double sigma_threshold = 0.5;
  double sigma_max = 1.0;
  std::string mu_route = "wage";
  std::optional<int> year;
  std::uint64_t seed = 0;
  unsigned threads = 1;
  bool no_wage_models = false;
  bool quiet = false;
  std::vector<std::string> columns;
};

int cmd_fit(const FitFlags& f, std::ostream& out, std::ostream& err) {
  ves::BatchOptions opt;
  opt.group_by = ves::parse_group_by(f.group_by);
  opt.pipeline.models = parse_models(f.models);
  if (f.max_degree < 1 || f.max_degree > ves::kMaxPolynomialDegree) {
    throw ves::Error(ves::ErrorCode::usage, "--max-degree must be in [1, 6]");
  }
  opt.pipeline.max_degree = f.max_degree;
  opt.pipeline.wage_models = !f.no_wage_models;
  opt.compare.sigma_threshold = f.sigma_threshold;
  opt.compare.sigma_max = f.sigma_max;
  opt.compare.mu_route = ves::parse_mu_route(f.mu_route);
  opt.year = f.year;
  opt.seed = f.seed;
  opt.threads = std::max(1u, f.threads);

  ves::IngestConfig ic;
  apply_column_overrides(f.columns, ic.columns);
  const ves::IngestResult in = ves::ingest(fs::path(f.input), ic);

  ves::BatchReport report = ves::run_batch(in.records, opt);
  for (const auto& [rule, n] : in.excluded.counts) report.exclusion_summary.counts["ingest:" + rule] += n;

  if (!f.quiet) {
    for (const auto& g : report.groups) {
      err << "group " << g.industry_code << ": n=" << g.n_used << " best=" << g.best.name()
          << " mu_wage=" << optional_cell(g.mu_wage_route)
          << " mu_inversion=" << optional_cell(g.mu_inversion_route)
          << " sigma_ces=" << optional_cell(g.sigma_ces) << '\n';
    }
    for (const auto& fail : report.failures) {
      err << "group " << fail.group << ": failed [" << fail.code << "] " << fail.message << '\n';
    }
  }
  write_output(f.out, ves::to_json(report).dump(2) + "\n", out);
  return report.failures.empty() ? kExitOk : kExitEstimation;
}

// ---- compare ---------------------------------------------------------------

struct CompareFlags {
  std::string report;
  std::string out = "-";
  std::optional<double> sigma_threshold;
  std::optional<double> sigma_max;
  std::optional<std::string> mu_route;
};

int cmd_compare(const CompareFlags& f, std::ostream& out, std::ostream& err) {
  std::ifstream in(f.report, std::ios::binary);
  if (!in) throw ves::Error(ves::ErrorCode::io, "cannot open '" + f.report + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ves::Error(ves::ErrorCode::schema, std::string("report is not valid JSON: ") + e.what());
  }
  ves::BatchReport report = ves::batch_report_from_json(j);
  ves::CompareConfig cc = report.options.compare;
  if (f.sigma_threshold) cc.sigma_threshold = *f.sigma_threshold;
  if (f.sigma_max) cc.sigma_max = *f.sigma_max;
  if (f.mu_route) cc.mu_route = ves::parse_mu_route(*f.mu_route);

  const auto rows = ves::compare_groups(report.groups, cc);
  write_output(f.out, comparison_csv(rows), out);

  const bool any_complete = std::any_of(rows.begin(), rows.end(),
                                        [](const auto& c) { return c.sigma_ces && c.mu_ves; });
  if (!rows.empty() && !any_complete) {
    err << "error[E_INSUFFICIENT_DATA]: no group in the report has both sigma_ces and a mu estimate\n";
    return kExitEstimation;
  }
  return kExitOk;
}

// ---- synth -----------------------------------------------------------------

struct SynthFlags {
  ves::SynthConfig cfg;
  std::string out = "-";
  bool no_wages = false;
};

int cmd_synth(SynthFlags f, std::ostream& out, std::ostream& err) {
  f.cfg.competitive_wages = !f.no_wages;
  if (f.cfg.params.mu < 0.0) {
    err << "warning: mu = " << f.cfg.params.mu << " < 0 ("
        << ves::mu_interpretation(f.cfg.params.mu) << ")\n";
  }
  ves::SynthDiagnostics diag;
  const auto records = ves::generate(f.cfg, &diag);
  if (diag.negative_wage_rows > 0) {
    err << "note: " << diag.negative_wage_rows
        << " rows have a negative marginal product of labor; wages hold |W| L\n";
  }
  std::ostringstream os;
  ves::write_records(os, records);
  write_output(f.out, os.str(), out);
  return kExitOk;
}

// ---- capital ---------------------------------------------------------------

struct CapitalFlags {
  std::string input;
  std::string out = "-";
  std::optional<int> year;
  std::vector<std::string> columns;
};

int cmd_capital(const CapitalFlags& f, std::ostream& out, std::ostream& err) {
  ves::IngestConfig ic;
  apply_column_overrides(f.columns, ic.columns);
  const ves::IngestResult in = ves::ingest(fs::path(f.input), ic);
  const ves::CapitalSummary summary = ves::capital_by_state(in.records, f.year);
  if (summary.unknown_state_rows > 0) {
    err << "warning: " << summary.unknown_state_rows << " rows carry an unrecognised state code\n";
  }
  if (summary.excluded_year_rows > 0) {
    err << "note: " << summary.excluded_year_rows << " rows outside the selected year ignored\n";
  }
  std::ostringstream os;
  os << "state,industry_code,invested_capital_rs_mn\n";
  for (const auto& c : summary.cells) {
    os << ves::csv_field(c.state) << ',' << ves::csv_field(c.industry_code) << ','
       << ves::format_double(c.invested_capital) << '\n';
  }
  write_output(f.out, os.str(), out);
  return kExitOk;
}

// ---- check -----------------------------------------------------------------

int cmd_check(const ves::VesParams& p, std::ostream& out, std::ostream&) {
  ves::validate(p);
  const std::vector<double> grid{0.25, 0.5, 1.0, 2.0, 4.0, 8.0};
  constexpr double kOdeTol = 1e-8;
  constexpr double kEulerTol = 1e-10;
  constexpr double kCesTol = 1e-12;
  constexpr double kGradTol = 1e-6;
  bool ok = true;
  out << std::setprecision(6) << std::scientific;

  auto line = [&](const std::string& name, double value, double tol) {
    const bool pass = value <= tol;
    ok = ok && pass;
    out << std::left << std::setw(22) << name << ' ' << value << "  tol " << tol << "  "
        << (pass ? "pass" : "FAIL") << '\n';
  };

  try {
    const ves::HlForm h = ves::ves_to_hl(p);
    double worst = 0.0;
    for (double x : grid) worst = std::max(worst, std::abs(ves::ode_residual(h, x)));
    line("ode_residual_max", worst, kOdeTol);
    out << "hl_form                a=" << h.a << " b=" << h.b << " c=" << h.c << " beta=" << h.beta
        << " wage_orientation=" << ves::wage_orientation(h.b, h.c) << '\n';
  } catch (const ves::Error& e) {
    if (e.code() != ves::ErrorCode::singular_denominator) throw;
    out << "ode_residual_max       skipped (" << e.what() << ")\n";
  }

  double euler = 0.0, grad = 0.0;
  std::size_t noncompetitive = 0;
  for (double x : grid) {
    const ves::FactorPrices fp = ves::factor_prices(p, x);
    const double y = ves::eval_ves_intensive(p, x);
    euler = std::max(euler, std::abs(fp.wage + fp.rental * x - y) / y);
    const double h = 1e-5 * x;
    const double fd = (ves::eval_ves_intensive(p, x + h) - ves::eval_ves_intensive(p, x - h)) / (2 * h);
    grad = std::max(grad, std::abs(fd - fp.rental) / std::abs(fp.rental));
    if (!fp.competitive) ++noncompetitive;
  }
  line("euler_residual_max", euler, kEulerTol);
  line("gradient_rel_err_max", grad, kGradTol);
  if (noncompetitive > 0) {
    out << "wage_sign              W <= 0 at " << noncompetitive << " of " << grid.size()
        << " grid points (no competitive wage)\n";
  }

  if (p.mu == 0.0) {
    double worst = 0.0;
    for (double k : grid) {
      for (double l : grid) {
        const double v = ves::eval_ves(p, k, l);
        worst = std::max(worst, std::abs(v - ves::eval_ces(p.ces(), k, l)) / v);
      }
    }
    line("ces_reduction_max", worst, kCesTol);
  } else {
    out << "ces_reduction_max      skipped (mu != 0)\n";
  }

  out << std::defaultfloat << std::setprecision(10);
  for (double x : grid) {
    out << "sigma(X=" << x << ")";
    try {
      out << "  " << ves::elasticity_of_substitution(p, x) << '\n';
    } catch (const ves::Error& e) {
      out << "  degenerate (" << e.what() << ")\n";
    }
  }
  out << "mu_interpretation      " << ves::mu_interpretation(p.mu) << '\n';
  out << (ok ? "all checks passed" : "some checks failed") << '\n';
  return ok ? kExitOk : kExitEstimation;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"VES production-function estimation toolkit", "vesprod"};
  app.option_defaults()->always_capture_default();
  app.require_subcommand(1);
  app.allow_extras(false);

  FitFlags fit;
  auto* fit_cmd = app.add_subcommand("fit", "Estimate every group and write the batch report JSON");
  fit_cmd->add_option("--input", fit.input, "Input CSV")->required();
  fit_cmd->add_option("--out", fit.out, "Report JSON path ('-' for stdout)")->required();
  fit_cmd->add_option("--group-by", fit.group_by, "Grouping column: industry_code, state or year");
  fit_cmd->add_option("--models", fit.models, "Shape models: polynomial, exponential, power")->delimiter(',');
  fit_cmd->add_option("--max-degree", fit.max_degree, "Largest polynomial degree tried");
  fit_cmd->add_option("--sigma-threshold", fit.sigma_threshold, "Priority needs sigma above this");
  fit_cmd->add_option("--sigma-max", fit.sigma_max, "Upper end of the admissible sigma band");
  fit_cmd->add_option("--mu-route", fit.mu_route, "Preferred mu estimate: wage or inversion");
  fit_cmd->add_option("--year", fit.year, "Only use rows from this year");
  fit_cmd->add_option("--seed", fit.seed, "Master seed recorded in the report");
  fit_cmd->add_option("--threads", fit.threads, "Groups estimated concurrently");
  fit_cmd->add_option("--column", fit.columns, "Column mapping field=header (repeatable)");
  fit_cmd->add_flag("--no-wage-models", fit.no_wage_models, "Skip the wage-route regressions");
  fit_cmd->add_flag("--quiet", fit.quiet, "No per-group log lines");

  CompareFlags cmp;
  auto* cmp_cmd = app.add_subcommand("compare", "Write the sigma/mu comparison CSV from a report");
  cmp_cmd->add_option("--report", cmp.report, "Batch report JSON")->required();
  cmp_cmd->add_option("--out", cmp.out, "CSV path ('-' for stdout)");
  cmp_cmd->add_option("--sigma-threshold", cmp.sigma_threshold, "Override the report's threshold");
  cmp_cmd->add_option("--sigma-max", cmp.sigma_max, "Override the report's sigma band");
  cmp_cmd->add_option("--mu-route", cmp.mu_route, "Override the report's mu route");

  SynthFlags syn;
  auto* syn_cmd = app.add_subcommand("synth", "Generate synthetic plant records from a VES technology");
  syn_cmd->add_option("--A", syn.cfg.params.A, "Efficiency scale");
  syn_cmd->add_option("--delta", syn.cfg.params.delta, "Distribution weight in (0, 1)");
  syn_cmd->add_option("--rho", syn.cfg.params.rho, "Substitution parameter");
  syn_cmd->add_option("--mu", syn.cfg.params.mu, "Capital-intensity parameter");
  syn_cmd->add_option("--n", syn.cfg.n, "Number of records");
  syn_cmd->add_option("--noise", syn.cfg.noise_sd, "Sd of the disturbance on ln(V/L)");
  syn_cmd->add_option("--seed", syn.cfg.seed, "Generator seed");
  syn_cmd->add_option("--x-low", syn.cfg.x_low, "Lower bound of K/L");
  syn_cmd->add_option("--x-high", syn.cfg.x_high, "Upper bound of K/L");
  syn_cmd->add_option("--labor-low", syn.cfg.labor_low, "Lower bound of L");
  syn_cmd->add_option("--labor-high", syn.cfg.labor_high, "Upper bound of L");
  syn_cmd->add_option("--industry", syn.cfg.industry_code, "industry_code column value");
  syn_cmd->add_option("--state", syn.cfg.state, "state column value");
  syn_cmd->add_option("--year", syn.cfg.year, "year column value");
  syn_cmd->add_option("--out", syn.out, "CSV path ('-' for stdout)");
  syn_cmd->add_flag("--no-wages", syn.no_wages, "Leave the wages column empty");

  CapitalFlags cap;
  auto* cap_cmd = app.add_subcommand("capital", "Total invested capital per state and industry");
  cap_cmd->add_option("--input", cap.input, "Input CSV")->required();
  cap_cmd->add_option("--out", cap.out, "CSV path ('-' for stdout)");
  cap_cmd->add_option("--year", cap.year, "Only count rows from this year");
  cap_cmd->add_option("--column", cap.columns, "Column mapping field=header (repeatable)");

  ves::VesParams chk;
  auto* chk_cmd = app.add_subcommand("check", "Verify ODE, Euler and CES identities for one parameter set");
  chk_cmd->add_option("--A", chk.A, "Efficiency scale");
  chk_cmd->add_option("--delta", chk.delta, "Distribution weight in (0, 1)");
  chk_cmd->add_option("--rho", chk.rho, "Substitution parameter");
  chk_cmd->add_option("--mu", chk.mu, "Capital-intensity parameter");

  std::vector<std::string> argv_rest(args.begin() + (args.empty() ? 0 : 1), args.end());
  std::reverse(argv_rest.begin(), argv_rest.end());
  try {
    app.parse(argv_rest);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*fit_cmd) return cmd_fit(fit, out, err);
    if (*cmp_cmd) return cmd_compare(cmp, out, err);
    if (*syn_cmd) return cmd_synth(syn, out, err);
    if (*cap_cmd) return cmd_capital(cap, out, err);
    if (*chk_cmd) return cmd_check(chk, out, err);
  } catch (const ves::Error& e) {
    report_error(err, e);
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error[E_INTERNAL]: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace vesprod
