#include "ves/regression.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

#include "ves/error.hpp"
#include "ves/stats.hpp"

namespace ves {

ModelSpec ModelSpec::polynomial(int d) {
  if (d < 1 || d > kMaxPolynomialDegree) {
    throw Error(ErrorCode::invalid_parameter, "polynomial degree must be in [1, 6]");
  }
  return {ModelKind::polynomial, d};
}

std::string ModelSpec::name() const {
  switch (kind) {
    case ModelKind::polynomial: return "polynomial(" + std::to_string(degree) + ")";
    case ModelKind::exponential: return "exponential";
    case ModelKind::power: return "power";
    case ModelKind::wage_three_var: return "wage_three_var";
    case ModelKind::wage_two_var: return "wage_two_var";
  }
  return "unknown";
}

ModelSpec ModelSpec::parse(std::string_view text) {
  if (text == "exponential") return exponential();
  if (text == "power") return power();
  if (text == "wage_three_var") return wage_three_var();
  if (text == "wage_two_var") return wage_two_var();
  if (text == "polynomial") return polynomial(1);
  constexpr std::string_view prefix = "polynomial(";
  if (text.starts_with(prefix) && text.ends_with(")")) {
    const std::string_view digits = text.substr(prefix.size(), text.size() - prefix.size() - 1);
    int d = 0;
    auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), d);
    if (ec == std::errc{} && ptr == digits.data() + digits.size()) return polynomial(d);
  }
  throw Error(ErrorCode::usage, "unknown model '" + std::string(text) + "'");
}

std::size_t ModelSpec::coefficient_count() const {
  switch (kind) {
    case ModelKind::polynomial: return static_cast<std::size_t>(degree) + 1;
    case ModelKind::wage_three_var: return 3;
    default: return 2;
  }
}

std::vector<std::string> ModelSpec::column_names() const {
  std::vector<std::string> names{"(Intercept)"};
  switch (kind) {
    case ModelKind::polynomial:
      for (int k = 1; k <= degree; ++k) names.push_back(k == 1 ? "log(X1)" : "log(X1)^" + std::to_string(k));
      break;
    case ModelKind::exponential: names.push_back("X1"); break;
    case ModelKind::power: names.push_back("log(X1)"); break;
    case ModelKind::wage_three_var:
      names.push_back("log(W)");
      names.push_back("log(X1)");
      break;
    case ModelKind::wage_two_var: names.push_back("log(W)"); break;
  }
  return names;
}

Design build_design(const ModelSpec& spec, std::span<const Observation> rows) {
  Design d;
  d.matrix.cols = spec.coefficient_count();
  d.matrix.column_names = spec.column_names();

  for (std::size_t i = 0; i < rows.size(); ++i) {
    const Observation& o = rows[i];
    if (!std::isfinite(o.output_per_worker) || !std::isfinite(o.capital_intensity)) {
      d.excluded.add("nonfinite-value", i);
      continue;
    }
    if (!(o.output_per_worker > 0.0)) {
      d.excluded.add("nonpositive-output-per-worker", i);
      continue;
    }
    if (!(o.capital_intensity > 0.0)) {
      d.excluded.add("nonpositive-capital-intensity", i);
      continue;
    }
    if (spec.needs_wage()) {
      if (!o.wage) {
        d.excluded.add("missing-wage", i);
        continue;
      }
      if (!(*o.wage > 0.0) || !std::isfinite(*o.wage)) {
        d.excluded.add("nonpositive-wage", i);
        continue;
      }
    }

    const double ln_x = std::log(o.capital_intensity);
    d.matrix.values.push_back(1.0);
    switch (spec.kind) {
      case ModelKind::polynomial: {
        double t = 1.0;
        for (int k = 1; k <= spec.degree; ++k) {
          t *= ln_x;
          d.matrix.values.push_back(t);
        }
        break;
      }
      case ModelKind::exponential: d.matrix.values.push_back(o.capital_intensity); break;
      case ModelKind::power: d.matrix.values.push_back(ln_x); break;
      case ModelKind::wage_three_var:
        d.matrix.values.push_back(std::log(*o.wage));
        d.matrix.values.push_back(ln_x);
        break;
      case ModelKind::wage_two_var: d.matrix.values.push_back(std::log(*o.wage)); break;
    }
    d.response.push_back(std::log(o.output_per_worker));
    d.used_rows.push_back(i);
  }
  d.matrix.rows = d.response.size();
  if (d.matrix.rows < d.matrix.cols) {
    throw Error(ErrorCode::insufficient_data,
                spec.name() + ": " + std::to_string(d.matrix.rows) + " usable rows for " +
                    std::to_string(d.matrix.cols) + " coefficients");
  }
  return d;
}

OlsFit fit_ols(const DesignMatrix& design, std::span<const double> response) {
  const auto n = static_cast<Eigen::Index>(design.rows);
  const auto p = static_cast<Eigen::Index>(design.cols);
  if (response.size() != design.rows) {
    throw Error(ErrorCode::invalid_parameter, "response length does not match the design");
  }
  if (n <= p) {
    throw Error(ErrorCode::insufficient_data,
                "n = " + std::to_string(n) + " must exceed p = " + std::to_string(p));
  }

  using RowMajor = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  const Eigen::MatrixXd x = Eigen::Map<const RowMajor>(design.values.data(), n, p);
  const Eigen::VectorXd y = Eigen::Map<const Eigen::VectorXd>(response.data(), n);

  const Eigen::HouseholderQR<Eigen::MatrixXd> qr(x);
  const Eigen::MatrixXd r = qr.matrixQR().topLeftCorner(p, p).triangularView<Eigen::Upper>();
  for (Eigen::Index j = 0; j < p; ++j) {
    const double norm = x.col(j).norm();
    if (norm == 0.0 || std::abs(r(j, j)) <= 1e-10 * norm) {
      const std::string name = static_cast<std::size_t>(j) < design.column_names.size()
                                   ? design.column_names[static_cast<std::size_t>(j)]
                                   : "column " + std::to_string(j);
      throw Error(ErrorCode::rank_deficient,
                  "design is rank deficient: '" + name + "' depends on the preceding columns");
    }
  }

  const Eigen::VectorXd qty = (qr.householderQ().transpose() * y).head(p);
  const auto upper = r.triangularView<Eigen::Upper>();
  const Eigen::VectorXd beta = upper.solve(qty);
  const Eigen::VectorXd fitted = x * beta;
  const Eigen::VectorXd resid = y - fitted;

  OlsFit fit;
  fit.n = static_cast<std::size_t>(n);
  fit.p = static_cast<std::size_t>(p);
  fit.rss = resid.squaredNorm();
  fit.fitted.assign(fitted.data(), fitted.data() + n);
  fit.residuals.assign(resid.data(), resid.data() + n);

  // (X'X)^-1 = R^-1 R^-T
  const Eigen::MatrixXd r_inv = upper.solve(Eigen::MatrixXd::Identity(p, p));
  const Eigen::MatrixXd cov_unscaled = r_inv * r_inv.transpose();
  const double dof = static_cast<double>(n - p);
  const double s2 = fit.rss / dof;

  for (Eigen::Index j = 0; j < p; ++j) {
    Coefficient c;
    c.name = static_cast<std::size_t>(j) < design.column_names.size()
                 ? design.column_names[static_cast<std::size_t>(j)]
                 : "x" + std::to_string(j);
    c.estimate = beta[j];
    c.std_error = std::sqrt(s2 * cov_unscaled(j, j));
    c.p_value = c.std_error > 0.0 ? student_t_two_sided_p(c.estimate / c.std_error, dof)
                                  : std::numeric_limits<double>::quiet_NaN();
    c.stars = significance_stars(c.p_value);
    fit.coefficients.push_back(std::move(c));
  }
  return fit;
}

InformationCriteria information_criteria(double rss, std::size_t n, std::size_t p) {
  if (p < 1 || n <= p) {
    throw Error(ErrorCode::insufficient_data, "information criteria need n > p >= 1");
  }
  if (!(rss >= 0.0) || !std::isfinite(rss)) {
    throw Error(ErrorCode::invalid_parameter, "rss must be finite and non-negative");
  }
  InformationCriteria ic;
  if (rss == 0.0) {
    ic.perfect_fit = true;
    ic.log_likelihood = std::numeric_limits<double>::infinity();
    ic.aic = -std::numeric_limits<double>::infinity();
    ic.bic = -std::numeric_limits<double>::infinity();
    return ic;
  }
  const double nn = static_cast<double>(n);
  const double k = static_cast<double>(p + 1);
  ic.log_likelihood = -0.5 * nn * (std::log(2.0 * std::numbers::pi) + std::log(rss / nn) + 1.0);
  ic.aic = 2.0 * k - 2.0 * ic.log_likelihood;
  ic.bic = k * std::log(nn) - 2.0 * ic.log_likelihood;
  return ic;
}

std::string_view to_string(SrmseBand band) {
  switch (band) {
    case SrmseBand::good: return "good";
    case SrmseBand::decent: return "decent";
    case SrmseBand::bad: return "bad";
  }
  return "bad";
}

SrmseBand parse_srmse_band(std::string_view text) {
  if (text == "good") return SrmseBand::good;
  if (text == "decent") return SrmseBand::decent;
  if (text == "bad") return SrmseBand::bad;
  throw Error(ErrorCode::schema, "unknown SRMSE band '" + std::string(text) + "'");
}

SrmseBand classify_srmse(double value) {
  if (value < 0.5) return SrmseBand::good;
  if (value <= 1.0) return SrmseBand::decent;
  return SrmseBand::bad;
}

Srmse srmse(std::span<const double> residuals, std::span<const double> response) {
  const std::size_t n = response.size();
  if (n < 2 || residuals.size() != n) {
    throw Error(ErrorCode::insufficient_data, "SRMSE needs n >= 2 matching residuals");
  }
  const double mean = std::accumulate(response.begin(), response.end(), 0.0) / static_cast<double>(n);
  double ss = 0.0;
  for (double v : response) ss += (v - mean) * (v - mean);
  const double sd = std::sqrt(ss / static_cast<double>(n - 1));
  if (!(sd > 0.0)) throw Error(ErrorCode::undefined_srmse, "response has zero variance");
  double sq = 0.0;
  for (double e : residuals) sq += e * e;
  const double rmse = std::sqrt(sq / static_cast<double>(n));
  Srmse out;
  out.value = rmse / sd;
  out.band = classify_srmse(out.value);
  return out;
}

const Coefficient* FitResult::find(std::string_view name) const {
  for (const auto& c : coefficients) {
    if (c.name == name) return &c;
  }
  return nullptr;
}

FitResult fit_model(const ModelSpec& spec, std::span<const Observation> rows,
                    ExclusionReport* excluded) {
  Design design = build_design(spec, rows);
  if (excluded) excluded->merge(design.excluded);
  const OlsFit ols = fit_ols(design.matrix, design.response);

  const double mean =
      std::accumulate(design.response.begin(), design.response.end(), 0.0) / static_cast<double>(ols.n);
  double tss = 0.0;
  double sum_sq = 0.0;
  for (double v : design.response) {
    tss += (v - mean) * (v - mean);
    sum_sq += v * v;
  }

  FitResult fit;
  fit.model = spec;
  fit.coefficients = ols.coefficients;
  fit.n = ols.n;
  fit.p = ols.p;
  fit.deviance = ols.rss;
  // Residuals at rounding level are an exact fit.
  fit.perfect_fit = ols.rss <= 1e-20 * std::max(tss, sum_sq);
  const InformationCriteria ic = information_criteria(fit.perfect_fit ? 0.0 : ols.rss, ols.n, ols.p);
  fit.log_likelihood = ic.log_likelihood;
  fit.aic = ic.aic;
  fit.bic = ic.bic;
  const double nn = static_cast<double>(ols.n);
  const double pp = static_cast<double>(ols.p);
  fit.r2 = tss > 0.0 ? 1.0 - ols.rss / tss : std::numeric_limits<double>::quiet_NaN();
  fit.adj_r2 = 1.0 - (1.0 - fit.r2) * (nn - 1.0) / (nn - pp);
  try {
    fit.srmse = srmse(ols.residuals, design.response);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::undefined_srmse) throw;
  }
  return fit;
}

namespace {

bool aic_tied(double a, double b) {
  if (std::isinf(a) && std::isinf(b)) return (a > 0) == (b > 0);
  return std::abs(a - b) < 1e-9;
}

}  // namespace

FitResult select_model(std::span<const FitResult> fits) {
  if (fits.empty()) throw Error(ErrorCode::insufficient_data, "no fits to select from");
  const FitResult* best = &fits.front();
  for (const FitResult& f : fits.subspan(1)) {
    if (f.n != best->n) {
      throw Error(ErrorCode::incomparable_fits, "fits use different observation counts (" +
                                                    std::to_string(best->n) + " vs " +
                                                    std::to_string(f.n) + ")");
    }
    if (aic_tied(f.aic, best->aic)) {
      if (f.p < best->p) best = &f;
    } else if (f.aic < best->aic) {
      best = &f;
    }
  }
  return *best;
}

DegreeSelection select_polynomial_degree(std::span<const Observation> rows, int max_degree) {
  if (max_degree < 1) throw Error(ErrorCode::invalid_parameter, "max_degree must be >= 1");
  max_degree = std::min(max_degree, kMaxPolynomialDegree);

  DegreeSelection out;
  for (int d = 1; d <= max_degree; ++d) {
    const ModelSpec spec = ModelSpec::polynomial(d);
    std::size_t usable = 0;
    for (const Observation& o : rows) {
      if (std::isfinite(o.output_per_worker) && std::isfinite(o.capital_intensity) &&
          o.output_per_worker > 0.0 && o.capital_intensity > 0.0) {
        ++usable;
      }
    }
    if (spec.coefficient_count() >= usable) {
      out.notes.push_back("degree " + std::to_string(d) + " skipped: p = " +
                          std::to_string(spec.coefficient_count()) + " needs more than " +
                          std::to_string(usable) + " observations");
      continue;
    }
    out.candidates.push_back(fit_model(spec, rows));
  }
  if (out.candidates.empty()) {
    throw Error(ErrorCode::insufficient_data, "no polynomial degree can be fitted");
  }
  out.best = select_model(out.candidates);
  return out;
}

}  // namespace ves
