#include "ves/serialize.hpp"

#include <cmath>
#include <limits>

#include "ves/error.hpp"

namespace ves {

using nlohmann::json;

json number_to_json(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

double number_from_json(const json& j) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  }
  throw Error(ErrorCode::schema, "expected a number, got " + j.dump());
}

namespace {

json optional_number(const std::optional<double>& v) { return v ? number_to_json(*v) : json(nullptr); }

std::optional<double> optional_number_from(const json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return number_from_json(j.at(key));
}

const json& field(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) {
    throw Error(ErrorCode::schema, std::string("report is missing '") + key + "'");
  }
  return j.at(key);
}

std::string_view kind_name(ModelKind k) {
  switch (k) {
    case ModelKind::polynomial: return "polynomial";
    case ModelKind::exponential: return "exponential";
    case ModelKind::power: return "power";
    case ModelKind::wage_three_var: return "wage_three_var";
    case ModelKind::wage_two_var: return "wage_two_var";
  }
  return "polynomial";
}

}  // namespace

json to_json(const ExclusionReport& r) {
  json j = json::object();
  for (const auto& [rule, n] : r.counts) j[rule] = n;
  return j;
}

json to_json(const FitResult& f) {
  json coefs = json::array();
  for (const Coefficient& c : f.coefficients) {
    coefs.push_back({{"name", c.name},
                     {"estimate", number_to_json(c.estimate)},
                     {"std_error", number_to_json(c.std_error)},
                     {"p_value", number_to_json(c.p_value)},
                     {"stars", c.stars}});
  }
  return {{"model", f.model.name()},
          {"coefficients", std::move(coefs)},
          {"n", f.n},
          {"p", f.p},
          {"deviance", number_to_json(f.deviance)},
          {"log_likelihood", number_to_json(f.log_likelihood)},
          {"aic", number_to_json(f.aic)},
          {"bic", number_to_json(f.bic)},
          {"r2", number_to_json(f.r2)},
          {"adj_r2", number_to_json(f.adj_r2)},
          {"srmse", f.srmse ? number_to_json(f.srmse->value) : json(nullptr)},
          {"srmse_band", f.srmse ? json(std::string(to_string(f.srmse->band))) : json(nullptr)},
          {"perfect_fit", f.perfect_fit}};
}

json to_json(const HlForm& h) {
  return {{"a", number_to_json(h.a)},
          {"b", number_to_json(h.b)},
          {"c", number_to_json(h.c)},
          {"beta", number_to_json(h.beta)}};
}

json to_json(const VesParams& p) {
  return {{"A", number_to_json(p.A)},
          {"delta", number_to_json(p.delta)},
          {"rho", number_to_json(p.rho)},
          {"mu", number_to_json(p.mu)}};
}

json to_json(const GroupEstimate& g) {
  json fits = json::array();
  for (const auto& [spec, f] : g.fits) fits.push_back(to_json(f));
  json wage_fits = json::array();
  for (const auto& [spec, f] : g.wage_fits) wage_fits.push_back(to_json(f));
  return {{"industry_code", g.industry_code},
          {"n_used", g.n_used},
          {"n_excluded", g.n_excluded},
          {"excluded", to_json(g.excluded)},
          {"fits", std::move(fits)},
          {"best", g.best.name()},
          {"wage_fits", std::move(wage_fits)},
          {"mu_wage_route", optional_number(g.mu_wage_route)},
          {"mu_inversion_route", optional_number(g.mu_inversion_route)},
          {"sigma_ces", optional_number(g.sigma_ces)},
          {"hl", g.hl ? to_json(*g.hl) : json(nullptr)},
          {"inverted_params", g.inverted_params ? to_json(*g.inverted_params) : json(nullptr)},
          {"diagnostics", g.diagnostics}};
}

json to_json(const IndustryComparison& c) {
  return {{"industry_code", c.industry_code},
          {"sigma_ces", optional_number(c.sigma_ces)},
          {"mu_ves", optional_number(c.mu_ves)},
          {"mu_source", c.mu_source ? json(std::string(to_string(*c.mu_source))) : json(nullptr)},
          {"reasonable", c.theoretically_reasonable},
          {"priority", c.priority}};
}

json to_json(const BatchReport& r) {
  json models = json::array();
  for (ModelKind k : r.options.pipeline.models) models.push_back(std::string(kind_name(k)));
  json config = {{"group_by", std::string(to_string(r.options.group_by))},
                 {"models", std::move(models)},
                 {"max_degree", r.options.pipeline.max_degree},
                 {"sigma_threshold", r.options.compare.sigma_threshold},
                 {"sigma_max", r.options.compare.sigma_max},
                 {"mu_route", std::string(to_string(r.options.compare.mu_route))},
                 {"year", r.options.year ? json(*r.options.year) : json(nullptr)},
                 {"seed", r.options.seed}};
  json groups = json::array();
  for (const auto& g : r.groups) groups.push_back(to_json(g));
  json failures = json::array();
  for (const auto& f : r.failures) {
    failures.push_back({{"group", f.group}, {"code", f.code}, {"message", f.message}});
  }
  json comparisons = json::array();
  for (const auto& c : r.comparisons) comparisons.push_back(to_json(c));
  return {{"config", std::move(config)},
          {"groups", std::move(groups)},
          {"failures", std::move(failures)},
          {"comparisons", std::move(comparisons)},
          {"exclusion_summary", to_json(r.exclusion_summary)}};
}

FitResult fit_result_from_json(const json& j) {
  FitResult f;
  f.model = ModelSpec::parse(field(j, "model").get<std::string>());
  for (const json& c : field(j, "coefficients")) {
    f.coefficients.push_back({field(c, "name").get<std::string>(), number_from_json(field(c, "estimate")),
                              number_from_json(field(c, "std_error")),
                              number_from_json(field(c, "p_value")), field(c, "stars").get<std::string>()});
  }
  f.n = field(j, "n").get<std::size_t>();
  f.p = field(j, "p").get<std::size_t>();
  f.deviance = number_from_json(field(j, "deviance"));
  f.log_likelihood = number_from_json(field(j, "log_likelihood"));
  f.aic = number_from_json(field(j, "aic"));
  f.bic = number_from_json(field(j, "bic"));
  f.r2 = number_from_json(field(j, "r2"));
  f.adj_r2 = number_from_json(field(j, "adj_r2"));
  if (auto v = optional_number_from(j, "srmse")) {
    f.srmse = Srmse{*v, parse_srmse_band(field(j, "srmse_band").get<std::string>())};
  }
  f.perfect_fit = j.value("perfect_fit", false);
  return f;
}

GroupEstimate group_estimate_from_json(const json& j) {
  GroupEstimate g;
  g.industry_code = field(j, "industry_code").get<std::string>();
  g.n_used = j.value("n_used", std::size_t{0});
  g.n_excluded = j.value("n_excluded", std::size_t{0});
  if (j.contains("excluded")) {
    for (const auto& [rule, n] : j.at("excluded").items()) g.excluded.counts[rule] = n.get<std::size_t>();
  }
  if (j.contains("fits")) {
    for (const json& f : j.at("fits")) {
      FitResult fit = fit_result_from_json(f);
      g.fits.emplace(fit.model, std::move(fit));
    }
  }
  if (j.contains("wage_fits")) {
    for (const json& f : j.at("wage_fits")) {
      FitResult fit = fit_result_from_json(f);
      g.wage_fits.emplace(fit.model, std::move(fit));
    }
  }
  if (j.contains("best")) g.best = ModelSpec::parse(j.at("best").get<std::string>());
  g.mu_wage_route = optional_number_from(j, "mu_wage_route");
  g.mu_inversion_route = optional_number_from(j, "mu_inversion_route");
  g.sigma_ces = optional_number_from(j, "sigma_ces");
  if (j.contains("hl") && !j.at("hl").is_null()) {
    const json& h = j.at("hl");
    g.hl = HlForm{number_from_json(field(h, "a")), number_from_json(field(h, "b")),
                  number_from_json(field(h, "c")), number_from_json(field(h, "beta"))};
  }
  if (j.contains("inverted_params") && !j.at("inverted_params").is_null()) {
    const json& p = j.at("inverted_params");
    g.inverted_params = VesParams{number_from_json(field(p, "A")), number_from_json(field(p, "delta")),
                                  number_from_json(field(p, "rho")), number_from_json(field(p, "mu"))};
  }
  if (j.contains("diagnostics")) g.diagnostics = j.at("diagnostics").get<std::vector<std::string>>();
  return g;
}

BatchReport batch_report_from_json(const json& j) {
  BatchReport r;
  for (const json& g : field(j, "groups")) r.groups.push_back(group_estimate_from_json(g));
  if (j.contains("failures")) {
    for (const json& f : j.at("failures")) {
      r.failures.push_back({field(f, "group").get<std::string>(), field(f, "code").get<std::string>(),
                            field(f, "message").get<std::string>()});
    }
  }
  if (j.contains("exclusion_summary")) {
    for (const auto& [rule, n] : j.at("exclusion_summary").items()) {
      r.exclusion_summary.counts[rule] = n.get<std::size_t>();
    }
  }
  if (j.contains("config")) {
    const json& c = j.at("config");
    if (c.contains("group_by")) r.options.group_by = parse_group_by(c.at("group_by").get<std::string>());
    r.options.pipeline.max_degree = c.value("max_degree", r.options.pipeline.max_degree);
    r.options.compare.sigma_threshold = c.value("sigma_threshold", r.options.compare.sigma_threshold);
    r.options.compare.sigma_max = c.value("sigma_max", r.options.compare.sigma_max);
    if (c.contains("mu_route")) r.options.compare.mu_route = parse_mu_route(c.at("mu_route").get<std::string>());
    if (c.contains("year") && !c.at("year").is_null()) r.options.year = c.at("year").get<int>();
    r.options.seed = c.value("seed", std::uint64_t{0});
    if (c.contains("models")) {
      r.options.pipeline.models.clear();
      for (const json& m : c.at("models")) {
        const ModelSpec spec = ModelSpec::parse(m.get<std::string>());
        r.options.pipeline.models.push_back(spec.kind);
      }
    }
  }
  r.comparisons = compare_groups(r.groups, r.options.compare);
  return r;
}

}  // namespace ves
