#include "ves/production.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

#include "ves/error.hpp"

namespace ves {
namespace {

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

[[noreturn]] void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

void require_positive(double v, const char* name) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    fail(ErrorCode::domain, std::string(name) + " must be positive and finite, got " + fmt(v));
  }
}

void check_exponent(double e, const char* label) {
  if (!std::isfinite(e) || std::abs(e) > kExpBound) {
    fail(ErrorCode::domain, std::string("exponent ") + label + " = " + fmt(e) +
                                " exceeds the exp bound " + fmt(kExpBound));
  }
}

void check_rho(double rho) {
  if (!std::isfinite(rho) || !(rho > -1.0)) {
    fail(ErrorCode::invalid_parameter, "rho must be finite and > -1, got " + fmt(rho));
  }
  if (std::abs(rho) < kRhoTolerance) {
    fail(ErrorCode::cobb_douglas_limit,
         "|rho| = " + fmt(std::abs(rho)) + " is below " + fmt(kRhoTolerance) +
             " (Cobb-Douglas limit, not representable in SMAC form)");
  }
}

double log_sum_exp(double x, double y) {
  const double hi = std::max(x, y);
  return hi + std::log1p(std::exp(std::min(x, y) - hi));
}

// Log-space decomposition of the intensive bracket
// B = d X^-rho + (1-d) X^-m and the derived quantities at one X.
struct Kernel {
  double log_y = 0.0;
  double y = 0.0;
  double share_k = 0.0;  // d X^-rho / B
  double share_l = 0.0;  // (1-d) X^-m / B
  double elasticity = 0.0;  // g = d ln Y / d ln X
  double one_minus_g = 0.0;
};

Kernel kernel(const VesParams& p, double X) {
  require_positive(X, "X");
  const double ln_x = std::log(X);
  const double m = p.intensity_exponent();
  check_exponent(-p.rho * ln_x, "-rho*ln(X)");
  check_exponent(-m * ln_x, "-mu*(1+rho)*ln(X)");

  const double t1 = std::log(p.delta) - p.rho * ln_x;
  const double t2 = std::log1p(-p.delta) - m * ln_x;
  const double ln_b = log_sum_exp(t1, t2);

  Kernel k;
  k.log_y = std::log(p.A) - ln_b / p.rho;
  check_exponent(k.log_y, "ln(Y)");
  k.y = std::exp(k.log_y);
  k.share_k = std::exp(t1 - ln_b);
  k.share_l = std::exp(t2 - ln_b);
  const double s = p.curvature_gap();
  k.one_minus_g = k.share_l * s / p.rho;
  k.elasticity = k.share_k + (m / p.rho) * k.share_l;
  return k;
}

}  // namespace

void validate(const CesParams& p) {
  if (!(p.A > 0.0) || !std::isfinite(p.A)) {
    fail(ErrorCode::invalid_parameter, "A must be positive, got " + fmt(p.A));
  }
  if (!(p.delta > 0.0 && p.delta < 1.0)) {
    fail(ErrorCode::invalid_parameter, "delta must lie in (0, 1), got " + fmt(p.delta));
  }
  check_rho(p.rho);
}

void validate_shape(const VesParams& p) {
  validate(p.ces());
  if (!std::isfinite(p.mu)) fail(ErrorCode::invalid_parameter, "mu must be finite");
}

void validate(const VesParams& p) {
  validate_shape(p);
  if (p.mu < 0.0) fail(ErrorCode::invalid_parameter, "mu must be >= 0, got " + fmt(p.mu));
}

void validate(const HlForm& h) {
  if (!(h.a > 0.0) || !std::isfinite(h.a)) {
    fail(ErrorCode::invalid_parameter, "a must be positive, got " + fmt(h.a));
  }
  if (!(h.b > 0.0) || !std::isfinite(h.b)) {
    fail(ErrorCode::invalid_parameter, "b must be positive, got " + fmt(h.b));
  }
  if (!std::isfinite(h.c) || !std::isfinite(h.beta)) {
    fail(ErrorCode::invalid_parameter, "c and beta must be finite");
  }
  (void)wage_orientation(h.b, h.c);
}

double log_ves_intensive(const VesParams& p, double X) {
  validate_shape(p);
  return kernel(p, X).log_y;
}

double eval_ves_intensive(const VesParams& p, double X) {
  validate_shape(p);
  return kernel(p, X).y;
}

double eval_ves(const VesParams& p, double K, double L) {
  require_positive(K, "K");
  require_positive(L, "L");
  const double v = L * eval_ves_intensive(p, K / L);
  if (!std::isfinite(v)) fail(ErrorCode::domain, "V = L * Y overflows");
  return v;
}

double eval_ces(const CesParams& p, double K, double L) {
  validate(p);
  require_positive(K, "K");
  require_positive(L, "L");
  const double ek = -p.rho * std::log(K);
  const double el = -p.rho * std::log(L);
  check_exponent(ek, "-rho*ln(K)");
  check_exponent(el, "-rho*ln(L)");
  const double ln_b = log_sum_exp(std::log(p.delta) + ek, std::log1p(-p.delta) + el);
  const double ln_v = std::log(p.A) - ln_b / p.rho;
  check_exponent(ln_v, "ln(V)");
  return std::exp(ln_v);
}

IntensiveDerivatives intensive_derivatives(const VesParams& p, double X) {
  validate_shape(p);
  const Kernel k = kernel(p, X);
  const double s = p.curvature_gap();
  IntensiveDerivatives d;
  d.value = k.y;
  d.first = k.y * k.elasticity / X;
  // f'' = (Y / X^2) (g - 1) (g + s w_K)
  d.second = -(k.y / (X * X)) * k.one_minus_g * (k.elasticity + s * k.share_k);
  return d;
}

FactorPrices factor_prices(const VesParams& p, double X) {
  validate_shape(p);
  const Kernel k = kernel(p, X);
  FactorPrices fp;
  fp.rental = k.y * k.elasticity / X;
  fp.wage = k.y * k.one_minus_g;
  fp.competitive = fp.wage > 0.0;
  return fp;
}

FactorPoint factor_point(const VesParams& p, double K, double L) {
  require_positive(K, "K");
  require_positive(L, "L");
  FactorPoint pt;
  pt.K = K;
  pt.L = L;
  pt.X = K / L;
  const FactorPrices fp = factor_prices(p, pt.X);
  pt.Y = eval_ves_intensive(p, pt.X);
  pt.V = L * pt.Y;
  pt.W = fp.wage;
  pt.r = fp.rental;
  return pt;
}

double elasticity_of_substitution(const VesParams& p, double X) {
  const IntensiveDerivatives d = intensive_derivatives(p, X);
  if (d.second == 0.0 || !std::isfinite(d.second)) {
    fail(ErrorCode::degenerate_curvature, "f''(X) = 0 at X = " + fmt(X));
  }
  const double wage = d.value - X * d.first;
  return -d.first * wage / (X * d.value * d.second);
}

int wage_orientation(double b, double c) {
  const double one_minus_b = 1.0 - b;
  const double gap = one_minus_b - c;
  if (std::abs(one_minus_b) < 1e-12) {
    fail(ErrorCode::singular_denominator, "b = 1 makes 1 - b singular");
  }
  if (std::abs(gap) < 1e-12) {
    fail(ErrorCode::singular_denominator, "1 - b - c = 0 (b = " + fmt(b) + ", c = " + fmt(c) + ")");
  }
  return (gap / one_minus_b) > 0.0 ? 1 : -1;
}

double hl_alpha(const HlForm& h) {
  validate(h);
  const double ln_alpha =
      -std::log(h.a) / h.b + std::log(std::abs(1.0 - h.b)) - std::log(std::abs(1.0 - h.b - h.c));
  check_exponent(ln_alpha, "ln(alpha)");
  return std::exp(ln_alpha);
}

VesParams hl_to_ves(const HlForm& h) {
  validate(h);
  if (!(h.beta > 0.0)) {
    fail(ErrorCode::non_economic_region, "beta must be positive, got " + fmt(h.beta));
  }
  const double alpha = hl_alpha(h);
  if (!(alpha > 0.0)) fail(ErrorCode::non_economic_region, "alpha must be positive");

  VesParams p;
  p.rho = 1.0 / h.b - 1.0;
  check_rho(p.rho);
  const double total = alpha + h.beta;
  const double ln_a = -std::log(total) / p.rho;
  check_exponent(ln_a, "ln(A)");
  p.A = std::exp(ln_a);
  p.delta = h.beta / total;
  p.mu = h.c;
  validate_shape(p);
  return p;
}

HlForm ves_to_hl(const VesParams& p) {
  validate_shape(p);
  const double s = p.curvature_gap();
  if (std::abs(s / (1.0 + p.rho)) < 1e-12) {
    fail(ErrorCode::singular_denominator,
         "1 - b - c = 0: mu = rho/(1+rho), the technology is linear in X");
  }
  const double scale = std::exp(-p.rho * std::log(p.A));
  HlForm h;
  h.b = 1.0 / (1.0 + p.rho);
  h.c = p.mu;
  h.beta = p.delta * scale;
  const double alpha = (1.0 - p.delta) * scale;
  // (1 - b - c) / (1 - b) == s / rho
  const double ln_a = -h.b * (std::log(alpha) + std::log(std::abs(s / p.rho)));
  check_exponent(ln_a, "ln(a)");
  h.a = std::exp(ln_a);
  return h;
}

double ode_residual_at(const HlForm& h, double X, double Y, double dYdX) {
  validate(h);
  require_positive(X, "X");
  require_positive(Y, "Y");
  const int orientation = wage_orientation(h.b, h.c);
  const double wage = orientation * (Y - X * dYdX);
  if (!(wage > 0.0)) {
    fail(ErrorCode::log_domain, "Y - X dY/dX = " + fmt(Y - X * dYdX) +
                                    " has no logarithm for this (b, c) orientation");
  }
  return std::log(Y) - std::log(h.a) - h.b * std::log(wage) - h.c * std::log(X);
}

double ode_residual(const HlForm& h, double X) {
  require_positive(X, "X");
  const double alpha = hl_alpha(h);
  const double ln_x = std::log(X);
  const double e1 = -h.c / h.b;         // exponent on the alpha term
  const double e2 = (h.b - 1.0) / h.b;  // exponent on the beta term
  check_exponent(e1 * ln_x, "-(c/b) ln(X)");
  check_exponent(e2 * ln_x, "((b-1)/b) ln(X)");
  const double t1 = alpha * std::exp(e1 * ln_x);
  const double t2 = h.beta * std::exp(e2 * ln_x);
  const double z = t1 + t2;
  if (!(z > 0.0)) fail(ErrorCode::log_domain, "closed-form bracket is not positive at X = " + fmt(X));
  const double power = h.b / (h.b - 1.0);
  const double ln_y = power * std::log(z);
  check_exponent(ln_y, "ln(Y)");
  const double y = std::exp(ln_y);
  const double dz = (e1 * t1 + e2 * t2) / X;
  const double dy = power * y * dz / z;
  return ode_residual_at(h, X, y, dy);
}

}  // namespace ves
