#pragma once

#include <compare>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ves/exclusion.hpp"

namespace ves {

enum class ModelKind { polynomial, exponential, power, wage_three_var, wage_two_var };

/// Regression shape. Every shape has response ln(V/L) and an intercept first:
///   polynomial(d)   ln X, (ln X)^2, ..., (ln X)^d
///   exponential     X (untransformed)
///   power           ln X
///   wage_three_var  ln W, ln X
///   wage_two_var    ln W
struct ModelSpec {
  ModelKind kind = ModelKind::polynomial;
  int degree = 1;  // polynomial only

  static ModelSpec polynomial(int d);
  static ModelSpec exponential() { return {ModelKind::exponential, 0}; }
  static ModelSpec power() { return {ModelKind::power, 0}; }
  static ModelSpec wage_three_var() { return {ModelKind::wage_three_var, 0}; }
  static ModelSpec wage_two_var() { return {ModelKind::wage_two_var, 0}; }

  /// "polynomial(3)", "exponential", "power", "wage_three_var", "wage_two_var".
  std::string name() const;
  /// Inverse of name(); "polynomial" alone means degree 1.
  static ModelSpec parse(std::string_view text);

  std::size_t coefficient_count() const;
  std::vector<std::string> column_names() const;
  bool needs_wage() const {
    return kind == ModelKind::wage_three_var || kind == ModelKind::wage_two_var;
  }

  auto operator<=>(const ModelSpec&) const = default;
};

inline constexpr int kMaxPolynomialDegree = 6;

/// One observation in intensive form. `wage` is W = wage bill / workers.
struct Observation {
  double output_per_worker = 0.0;  // Y = V / L
  double capital_intensity = 0.0;  // X = K / L
  std::optional<double> wage;
};

/// Dense row-major design matrix.
struct DesignMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> values;
  std::vector<std::string> column_names;

  double operator()(std::size_t i, std::size_t j) const { return values[i * cols + j]; }
  double& operator()(std::size_t i, std::size_t j) { return values[i * cols + j]; }
};

struct Design {
  DesignMatrix matrix;
  std::vector<double> response;
  std::vector<std::size_t> used_rows;
  ExclusionReport excluded;
};

/// Builds regressors and response for `spec`; rows with a non-positive value
/// under a logarithm are rejected into `excluded`. Throws insufficient_data
/// when fewer usable rows remain than coefficients.
Design build_design(const ModelSpec& spec, std::span<const Observation> rows);

struct Coefficient {
  std::string name;
  double estimate = 0.0;
  double std_error = 0.0;
  double p_value = 0.0;
  std::string stars;
};

struct OlsFit {
  std::vector<Coefficient> coefficients;
  std::vector<double> fitted;
  std::vector<double> residuals;
  double rss = 0.0;
  std::size_t n = 0;
  std::size_t p = 0;
};

/// Least squares through a Householder QR factorization. A column whose
/// R diagonal is below 1e-10 times its own norm is reported as dependent.
OlsFit fit_ols(const DesignMatrix& design, std::span<const double> response);

struct InformationCriteria {
  double log_likelihood = 0.0;
  double aic = 0.0;
  double bic = 0.0;
  bool perfect_fit = false;  // rss == 0: aic = bic = -inf, log_likelihood = +inf
};

/// Gaussian log-likelihood with the error variance counted as a parameter:
///   ll  = -(n/2)(ln 2pi + ln(rss/n) + 1)
///   aic = 2(p+1) - 2 ll,  bic = (p+1) ln n - 2 ll
InformationCriteria information_criteria(double rss, std::size_t n, std::size_t p);

enum class SrmseBand { good, decent, bad };

std::string_view to_string(SrmseBand band);
SrmseBand parse_srmse_band(std::string_view text);
SrmseBand classify_srmse(double value);

struct Srmse {
  double value = 0.0;
  SrmseBand band = SrmseBand::good;
};

/// RMSE of the residuals over the sample standard deviation of the response.
Srmse srmse(std::span<const double> residuals, std::span<const double> response);

struct FitResult {
  ModelSpec model;
  std::vector<Coefficient> coefficients;
  std::size_t n = 0;
  std::size_t p = 0;
  double deviance = 0.0;
  double log_likelihood = 0.0;
  double aic = 0.0;
  double bic = 0.0;
  double r2 = 0.0;
  double adj_r2 = 0.0;
  std::optional<Srmse> srmse;  // absent when the response has no variance
  bool perfect_fit = false;

  const Coefficient* find(std::string_view name) const;
};

/// build_design + fit_ols + the statistics battery. Rejected rows are added to
/// `excluded` when it is non-null.
FitResult fit_model(const ModelSpec& spec, std::span<const Observation> rows,
                    ExclusionReport* excluded = nullptr);

/// Minimum AIC; ties (|dAIC| < 1e-9) go to fewer coefficients, then to the
/// earlier fit. Throws incomparable_fits when n differs.
FitResult select_model(std::span<const FitResult> fits);

struct DegreeSelection {
  FitResult best;
  std::vector<FitResult> candidates;
  std::vector<std::string> notes;  // skipped degrees and why
};

/// Fits polynomial degrees 1..max_degree and keeps the minimum-AIC fit.
/// Degrees with p >= n are skipped with a note.
DegreeSelection select_polynomial_degree(std::span<const Observation> rows, int max_degree);

}  // namespace ves
