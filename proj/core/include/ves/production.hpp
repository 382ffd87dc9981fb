#pragma once

// Closed-form CES and VES production functions in SMAC notation, their
// factor prices and elasticity of substitution, and the conversion between
// the SMAC parameters and the Hildebrand-Liu regression coefficients.
//
// Intensive VES form, X = K/L, Y = V/L:
//
//   Y = A [ d X^-rho + (1 - d) X^-(mu (1 + rho)) ]^(-1/rho)
//
// mu = 0 gives the CES function. Every power is evaluated in log space.

namespace ves {

/// Smallest |rho| accepted; below it the function is in the Cobb-Douglas limit.
inline constexpr double kRhoTolerance = 1e-6;

/// Largest exponent magnitude handed to exp(); the double-precision bound.
inline constexpr double kExpBound = 709.0;

struct CesParams {
  double A = 1.0;
  double delta = 0.5;
  double rho = 1.0;

  /// Implied constant elasticity 1 / (1 + rho).
  double sigma() const { return 1.0 / (1.0 + rho); }
};

struct VesParams {
  double A = 1.0;
  double delta = 0.5;
  double rho = 1.0;
  double mu = 0.0;

  CesParams ces() const { return {A, delta, rho}; }

  /// Exponent on X in the capital-intensity term: mu (1 + rho).
  double intensity_exponent() const { return mu * (1.0 + rho); }

  /// s = rho - mu (1 + rho). Sign of s / rho is the sign of the competitive wage.
  double curvature_gap() const { return rho - mu * (1.0 + rho); }
};

/// Hildebrand-Liu coefficients of ln(V/L) = ln a + b ln W + c ln(K/L),
/// plus the integration constant beta of the closed-form ODE solution.
struct HlForm {
  double a = 1.0;
  double b = 0.5;
  double c = 0.0;
  double beta = 0.5;
};

/// One input/output point of a VES technology.
struct FactorPoint {
  double K = 0.0;  // capital, Rs millions
  double L = 0.0;  // labor, persons
  double X = 0.0;  // K / L
  double Y = 0.0;  // V / L
  double V = 0.0;  // value added
  double W = 0.0;  // marginal product of labor (may be <= 0, see FactorPrices)
  double r = 0.0;  // marginal product of capital
};

struct FactorPrices {
  double wage = 0.0;    // f(X) - X f'(X)
  double rental = 0.0;  // f'(X)
  /// False where the marginal product of labor is not positive, i.e. the
  /// point is outside the region where a competitive wage exists.
  bool competitive = true;
};

/// f, f' and f'' of the intensive form, all analytic.
struct IntensiveDerivatives {
  double value = 0.0;
  double first = 0.0;
  double second = 0.0;
};

// Validation throws ves::Error. `validate_shape` checks every VesParams
// invariant except the sign of mu; `validate` checks all of them.
void validate(const CesParams& p);
void validate(const VesParams& p);
void validate_shape(const VesParams& p);
void validate(const HlForm& h);

double eval_ves(const VesParams& p, double K, double L);
double eval_ves_intensive(const VesParams& p, double X);
double eval_ces(const CesParams& p, double K, double L);

/// ln Y of the intensive form; finite wherever eval_ves_intensive is.
double log_ves_intensive(const VesParams& p, double X);

IntensiveDerivatives intensive_derivatives(const VesParams& p, double X);
FactorPrices factor_prices(const VesParams& p, double X);
FactorPoint factor_point(const VesParams& p, double K, double L);

/// sigma = -f'(f - X f') / (X f f''). Equals 1/(1+rho) at every X when mu = 0.
double elasticity_of_substitution(const VesParams& p, double X);

/// +1 when (1 - b - c) / (1 - b) > 0 and the competitive wage is positive,
/// -1 when the wage implied by the technology is negative. In the latter case
/// the Hildebrand-Liu relation holds in |W|. Throws on a singular denominator.
int wage_orientation(double b, double c);

/// alpha = a^(-1/b) |1 - b| / |1 - b - c|.
double hl_alpha(const HlForm& h);

VesParams hl_to_ves(const HlForm& h);
HlForm ves_to_hl(const VesParams& p);

/// Residual of ln Y = ln a + b ln(Y - X dY/dX) + c ln X for given Y and dY/dX.
double ode_residual_at(const HlForm& h, double X, double Y, double dYdX);

/// Same residual with Y and dY/dX taken from the closed-form solution for h.
double ode_residual(const HlForm& h, double X);

}  // namespace ves
