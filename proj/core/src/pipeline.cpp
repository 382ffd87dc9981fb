#include "ves/pipeline.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cctype>
#include <cmath>
#include <limits>
#include <numeric>
#include <thread>

#include "ves/error.hpp"

namespace ves {

std::string_view to_string(MuRoute route) {
  return route == MuRoute::wage ? "wage" : "inversion";
}

MuRoute parse_mu_route(std::string_view text) {
  if (text == "wage") return MuRoute::wage;
  if (text == "inversion") return MuRoute::inversion;
  throw Error(ErrorCode::usage, "mu route must be 'wage' or 'inversion', got '" + std::string(text) + "'");
}

std::string_view to_string(GroupBy g) {
  switch (g) {
    case GroupBy::industry_code: return "industry_code";
    case GroupBy::state: return "state";
    case GroupBy::year: return "year";
  }
  return "industry_code";
}

GroupBy parse_group_by(std::string_view text) {
  if (text == "industry_code") return GroupBy::industry_code;
  if (text == "state") return GroupBy::state;
  if (text == "year") return GroupBy::year;
  throw Error(ErrorCode::usage, "group-by must be industry_code, state or year");
}

Observation to_observation(const PlantRecord& r) {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  Observation o;
  const bool labor_ok = r.workers > 0.0 && std::isfinite(r.workers);
  o.output_per_worker = labor_ok ? r.value_added / r.workers : nan;
  o.capital_intensity = labor_ok ? r.capital / r.workers : nan;
  if (r.wages && labor_ok) o.wage = *r.wages / r.workers;
  return o;
}

namespace {

std::string failure_text(const Error& e) {
  return std::string(to_string(e.code())) + ": " + e.what();
}

// Level-matching integration constant: the closed form passes through the
// geometric mean of Y at the geometric mean of X.
// Mean level of z = Y^((b-1)/b) against the closed form z = alpha X^(-c/b) + beta X^((b-1)/b).
std::optional<double> recover_beta(const HlForm& h, std::span<const Observation> rows,
                                   std::vector<std::string>& diagnostics) {
  const double alpha = hl_alpha(h);
  const double e = 1.0 - 1.0 / h.b;
  double sum_u = 0.0, sum_v = 0.0;
  std::size_t n = 0;
  for (const Observation& o : rows) {
    if (!(o.wage && *o.wage > 0.0 && o.output_per_worker > 0.0 && o.capital_intensity > 0.0)) continue;
    const double ln_x = std::log(o.capital_intensity);
    sum_u += std::exp(e * std::log(o.output_per_worker)) - alpha * std::exp(-h.c / h.b * ln_x);
    sum_v += std::exp(e * ln_x);
    ++n;
  }
  if (n == 0) return std::nullopt;
  const double beta = sum_u / sum_v;
  if (!(beta > 0.0) || !std::isfinite(beta)) {
    diagnostics.push_back("hl: level-matching beta is not positive; HL form omitted");
    return std::nullopt;
  }
  return beta;
}

}  // namespace

GroupEstimate estimate_group(std::string group_key, std::span<const PlantRecord> rows,
                             const PipelineConfig& config) {
  GroupEstimate g;
  g.industry_code = std::move(group_key);

  std::vector<Observation> obs;
  obs.reserve(rows.size());
  std::transform(rows.begin(), rows.end(), std::back_inserter(obs), to_observation);

  for (std::size_t i = 0; i < obs.size(); ++i) {
    const Observation& o = obs[i];
    if (!std::isfinite(o.output_per_worker) || !std::isfinite(o.capital_intensity)) {
      g.excluded.add("nonfinite-value", i);
    } else if (!(o.output_per_worker > 0.0)) {
      g.excluded.add("nonpositive-output-per-worker", i);
    } else if (!(o.capital_intensity > 0.0)) {
      g.excluded.add("nonpositive-capital-intensity", i);
    }
  }
  g.n_excluded = g.excluded.total();
  g.n_used = obs.size() - g.n_excluded;

  std::vector<FitResult> shape_fits;
  for (ModelKind kind : config.models) {
    try {
      switch (kind) {
        case ModelKind::polynomial: {
          DegreeSelection sel = select_polynomial_degree(obs, config.max_degree);
          for (auto& note : sel.notes) g.diagnostics.push_back("polynomial: " + note);
          shape_fits.push_back(std::move(sel.best));
          break;
        }
        case ModelKind::exponential:
          shape_fits.push_back(fit_model(ModelSpec::exponential(), obs));
          break;
        case ModelKind::power:
          shape_fits.push_back(fit_model(ModelSpec::power(), obs));
          break;
        default:
          throw Error(ErrorCode::usage, "wage models are not shape models");
      }
    } catch (const Error& e) {
      if (e.code() == ErrorCode::usage) throw;
      g.diagnostics.push_back(std::string(kind == ModelKind::polynomial    ? "polynomial"
                                          : kind == ModelKind::exponential ? "exponential"
                                                                           : "power") +
                              ": " + failure_text(e));
    }
  }
  if (shape_fits.empty()) {
    throw Error(ErrorCode::insufficient_data,
                "group '" + g.industry_code + "': no model could be fitted (" +
                    std::to_string(g.n_used) + " usable rows)");
  }
  g.best = select_model(shape_fits).model;
  for (auto& f : shape_fits) g.fits.emplace(f.model, std::move(f));

  // Inversion route from the selected polynomial.
  const auto poly = std::find_if(g.fits.begin(), g.fits.end(), [](const auto& kv) {
    return kv.first.kind == ModelKind::polynomial;
  });
  if (poly != g.fits.end()) {
    if (poly->first.degree >= 3) {
      LinearizationCoefficients c;
      c.intercept = poly->second.coefficients[0].estimate;
      for (std::size_t k = 1; k < poly->second.coefficients.size(); ++k) {
        c.phi.push_back(poly->second.coefficients[k].estimate);
      }
      try {
        const InversionResult inv = invert_linearization(c, config.inversion);
        if (inv.root) {
          g.mu_inversion_route = inv.root->params.mu;
          g.inverted_params = inv.root->params;
        } else {
          g.diagnostics.push_back(
              "inversion: degenerate s = 0 family, mu = rho/(1+rho) with rho unidentified");
        }
      } catch (const Error& e) {
        g.diagnostics.push_back("inversion: " + failure_text(e));
      }
    } else {
      g.diagnostics.push_back("inversion: skipped, selected polynomial degree " +
                              std::to_string(poly->first.degree) + " < 3");
    }
  }

  if (config.wage_models) {
    const bool any_wage = std::any_of(obs.begin(), obs.end(), [](const Observation& o) { return o.wage.has_value(); });
    if (!any_wage) {
      g.diagnostics.push_back("wage: no wage data, wage-route estimates skipped");
    } else {
      try {
        FitResult three = fit_model(ModelSpec::wage_three_var(), obs);
        const double ln_a = three.coefficients[0].estimate;
        const double b = three.coefficients[1].estimate;
        const double c = three.coefficients[2].estimate;
        g.mu_wage_route = c;
        try {
          HlForm h{std::exp(ln_a), b, c, 1.0};
          if (auto beta = recover_beta(h, obs, g.diagnostics)) {
            h.beta = *beta;
            validate(h);
            g.hl = h;
          }
        } catch (const Error& e) {
          g.diagnostics.push_back("hl: " + failure_text(e));
        }
        g.wage_fits.emplace(three.model, std::move(three));
      } catch (const Error& e) {
        g.diagnostics.push_back("wage_three_var: " + failure_text(e));
      }
      try {
        FitResult two = fit_model(ModelSpec::wage_two_var(), obs);
        g.sigma_ces = two.coefficients[1].estimate;
        g.wage_fits.emplace(two.model, std::move(two));
      } catch (const Error& e) {
        g.diagnostics.push_back("wage_two_var: " + failure_text(e));
      }
    }
  }

  for (const auto* v : {&g.mu_wage_route, &g.mu_inversion_route, &g.sigma_ces}) {
    if (v->has_value() && !std::isfinite(**v)) {
      throw Error(ErrorCode::domain, "group '" + g.industry_code + "': non-finite estimate");
    }
  }
  return g;
}

std::vector<IndustryComparison> compare_groups(std::span<const GroupEstimate> estimates,
                                               const CompareConfig& config) {
  std::vector<IndustryComparison> out;
  out.reserve(estimates.size());
  for (const GroupEstimate& g : estimates) {
    IndustryComparison c;
    c.industry_code = g.industry_code;
    c.sigma_ces = g.sigma_ces;
    const auto& first = config.mu_route == MuRoute::wage ? g.mu_wage_route : g.mu_inversion_route;
    const auto& second = config.mu_route == MuRoute::wage ? g.mu_inversion_route : g.mu_wage_route;
    if (first) {
      c.mu_ves = first;
      c.mu_source = config.mu_route;
    } else if (second) {
      c.mu_ves = second;
      c.mu_source = config.mu_route == MuRoute::wage ? MuRoute::inversion : MuRoute::wage;
    }
    if (c.sigma_ces) {
      const double s = *c.sigma_ces;
      c.theoretically_reasonable = s > 0.0 && s <= config.sigma_max;
      c.priority = c.theoretically_reasonable && s > config.sigma_threshold && c.mu_ves && *c.mu_ves > 0.0;
    }
    out.push_back(std::move(c));
  }
  std::sort(out.begin(), out.end(), [](const IndustryComparison& a, const IndustryComparison& b) {
    if (a.sigma_ces.has_value() != b.sigma_ces.has_value()) return a.sigma_ces.has_value();
    if (a.sigma_ces && *a.sigma_ces != *b.sigma_ces) return *a.sigma_ces > *b.sigma_ces;
    return a.industry_code < b.industry_code;
  });
  return out;
}

bool is_known_state(std::string_view state) {
  static constexpr std::array<std::string_view, 41> kCodes{
      "AN", "AP", "AR", "AS", "BR", "CH", "CG", "CT", "DD", "DH", "DL", "DN", "GA", "GJ",
      "HP", "HR", "JH", "JK", "KA", "KL", "LA", "LD", "MH", "ML", "MN", "MP", "MZ", "NL",
      "OD", "OR", "PB", "PY", "RJ", "SK", "TG", "TN", "TR", "TS", "UK", "UP", "WB"};
  static constexpr std::array<std::string_view, 38> kNames{
      "andaman and nicobar islands", "andhra pradesh", "arunachal pradesh", "assam", "bihar",
      "chandigarh", "chhattisgarh", "dadra and nagar haveli and daman and diu", "delhi", "goa",
      "gujarat", "gujrat", "haryana", "himachal pradesh", "jammu and kashmir", "jharkhand",
      "karnataka", "kerala", "ladakh", "lakshadweep", "madhya pradesh", "maharashtra", "manipur",
      "meghalaya", "mizoram", "nagaland", "odisha", "orissa", "puducherry", "punjab", "rajasthan",
      "sikkim", "tamil nadu", "telangana", "tripura", "uttar pradesh", "uttarakhand", "west bengal"};
  if (state.size() > 3 && (state.substr(0, 3) == "IN-" || state.substr(0, 3) == "in-")) state.remove_prefix(3);
  std::string upper, lower;
  for (char ch : state) {
    upper.push_back(static_cast<char>(std::toupper(static_cast<unsigned char>(ch))));
    lower.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(ch))));
  }
  return std::find(kCodes.begin(), kCodes.end(), upper) != kCodes.end() ||
         std::find(kNames.begin(), kNames.end(), lower) != kNames.end();
}

CapitalSummary capital_by_state(std::span<const PlantRecord> rows, std::optional<int> year) {
  CapitalSummary out;
  std::map<std::pair<std::string, std::string>, double> totals;
  for (const PlantRecord& r : rows) {
    if (year && r.year != *year) {
      ++out.excluded_year_rows;
      continue;
    }
    if (!is_known_state(r.state)) ++out.unknown_state_rows;
    totals[{r.state, r.industry_code}] += std::max(r.capital, 0.0);
  }
  for (const auto& [key, total] : totals) out.cells.push_back({key.first, key.second, total});
  return out;
}

std::string_view mu_interpretation(double mu, double tolerance) {
  if (!std::isfinite(mu)) throw Error(ErrorCode::domain, "mu must be finite");
  if (mu > tolerance) return "capital-intensive-production-indicated";
  if (mu < -tolerance) return "labor-intensive-indicated";
  return "ces-equivalent";
}

BatchReport run_batch(std::span<const PlantRecord> records, const BatchOptions& options) {
  BatchReport report;
  report.options = options;

  std::map<std::string, std::vector<PlantRecord>> groups;
  for (std::size_t i = 0; i < records.size(); ++i) {
    const PlantRecord& r = records[i];
    if (options.year && r.year != *options.year) {
      report.exclusion_summary.counts["year-filtered"]++;
      continue;
    }
    std::string key;
    switch (options.group_by) {
      case GroupBy::industry_code: key = r.industry_code; break;
      case GroupBy::state: key = r.state; break;
      case GroupBy::year: key = std::to_string(r.year); break;
    }
    groups[key].push_back(r);
  }

  std::vector<const std::pair<const std::string, std::vector<PlantRecord>>*> work;
  for (const auto& kv : groups) work.push_back(&kv);

  std::vector<std::optional<GroupEstimate>> estimates(work.size());
  std::vector<std::optional<GroupFailure>> failures(work.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < work.size(); i = next++) {
      const auto& [key, rows] = *work[i];
      try {
        estimates[i] = estimate_group(key, rows, options.pipeline);
      } catch (const Error& e) {
        failures[i] = GroupFailure{key, std::string(to_string(e.code())), e.what()};
      }
    }
  };
  const unsigned threads = std::max(1u, std::min<unsigned>(options.threads, static_cast<unsigned>(work.size())));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  }

  for (std::size_t i = 0; i < work.size(); ++i) {
    if (estimates[i]) {
      for (const auto& [rule, n] : estimates[i]->excluded.counts) report.exclusion_summary.counts[rule] += n;
      report.groups.push_back(std::move(*estimates[i]));
    }
    if (failures[i]) report.failures.push_back(std::move(*failures[i]));
  }
  report.comparisons = compare_groups(report.groups, options.compare);
  return report;
}

}  // namespace ves
