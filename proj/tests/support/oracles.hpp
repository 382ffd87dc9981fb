#pragma once

// Reference computations for the tests. None of these call into ves_core's
// numerical code paths.

#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <optional>
#include <vector>

#include "ves/production.hpp"

namespace oracle {

// Direct formula, no log-space tricks.
inline double ves_intensive(const ves::VesParams& p, double x) {
  const double m = p.mu * (1.0 + p.rho);
  return p.A * std::pow(p.delta * std::pow(x, -p.rho) + (1.0 - p.delta) * std::pow(x, -m), -1.0 / p.rho);
}

inline double ves_kl(const ves::VesParams& p, double k, double l) { return l * ves_intensive(p, k / l); }

inline double ces_kl(double A, double delta, double rho, double k, double l) {
  return A * std::pow(delta * std::pow(k, -rho) + (1.0 - delta) * std::pow(l, -rho), -1.0 / rho);
}

// Finite differences run in long double on the direct formula; f'' can sit
// six orders of magnitude below f/X^2, which double rounding would swamp.
inline long double ves_intensive_ld(const ves::VesParams& p, long double x) {
  const long double rho = p.rho, m = static_cast<long double>(p.mu) * (1.0L + rho);
  return p.A * std::pow(p.delta * std::pow(x, -rho) + (1.0L - p.delta) * std::pow(x, -m), -1.0L / rho);
}

inline double central_first(const std::function<long double(long double)>& f, double x, double h) {
  const long double lx = x, lh = h;
  return static_cast<double>((f(lx + lh) - f(lx - lh)) / (2.0L * lh));
}

inline double central_second(const std::function<long double(long double)>& f, double x, double h) {
  const long double lx = x, lh = h;
  return static_cast<double>((f(lx + lh) - 2.0L * f(lx) + f(lx - lh)) / (lh * lh));
}

/// Taylor coefficients of ln Y(e^t) around t = 0, phi[0] = ln A, via
/// forward-mode automatic differentiation.
std::vector<double> log_output_taylor(const ves::VesParams& p, std::size_t degree);

/// Closed-form inverse of the degree-3 map (phi1, phi2, phi3) -> (delta, rho, mu).
/// Empty when phi2 == 0 or the recovered point leaves the domain.
std::optional<ves::VesParams> closed_form_inverse(double A, double phi1, double phi2, double phi3);

struct OlsReference {
  std::vector<double> beta;
  std::vector<double> std_error;
  double rss = 0.0;
};

/// Normal equations in long double with Gauss-Jordan elimination.
OlsReference normal_equations(const std::vector<std::vector<double>>& x, const std::vector<double>& y);

/// Two-sided p-value from boost's Student-t cdf.
double t_two_sided(double t, double dof);

}  // namespace oracle
