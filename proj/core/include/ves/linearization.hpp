#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "ves/error.hpp"
#include "ves/production.hpp"

namespace ves {

/// Polynomial approximation of ln(V/L) in t = ln(K/L) around t = 0:
///   ln Y ~ intercept + phi[0] t + phi[1] t^2 + ... + phi[d-1] t^d
struct LinearizationCoefficients {
  double intercept = 0.0;
  std::vector<double> phi;

  std::size_t degree() const { return phi.size(); }
  double evaluate(double t) const;
};

inline constexpr std::size_t kMaxLinearizationDegree = 6;

/// Taylor coefficients of ln Y(e^t) at t = 0, degree 1..6.
///
/// With s = rho - mu (1 + rho) the log bracket is ln[d + (1-d) e^{st}], the
/// cumulant generating function of a Bernoulli(1-d) variable evaluated at
/// s t, so phi_k = [k == 1] - s^k kappa_k / (rho k!). For mu = 0 this is the
/// Kmenta approximation: phi_1 = d, phi_2 = -rho d (1-d) / 2.
LinearizationCoefficients linearize_ves(const VesParams& p, std::size_t degree = 3);

/// n-th cumulant (n >= 1) of a Bernoulli(q) variable.
double bernoulli_cumulant(std::size_t n, double q);

struct InversionOptions {
  double damping = 0.5;            // step-halving factor in the line search
  int max_iterations = 100;        // per start
  double residual_tolerance = 1e-10;
  double merge_distance = 1e-8;    // roots closer than this are one root
  double degenerate_phi2 = 1e-12;  // |phi_2| below this selects the s = 0 family
  std::size_t delta_starts = 10;   // grid over (0.05, 0.95)
  std::size_t rho_starts = 10;     // grid over (0.1, 3)
};

struct InversionRoot {
  VesParams params;
  double residual = 0.0;
};

/// s = 0 gives ln Y = ln A + ln X exactly: delta and rho are not identified,
/// and mu is tied to rho by mu = rho / (1 + rho).
struct ConstrainedFamily {
  double A = 1.0;
  double mu_of_rho(double rho) const { return rho / (1.0 + rho); }
};

struct InversionResult {
  std::optional<InversionRoot> root;
  std::optional<ConstrainedFamily> family;

  bool unique() const { return root.has_value(); }
};

class NonInvertibleError : public Error {
 public:
  NonInvertibleError(const std::string& what, double best_residual)
      : Error(ErrorCode::non_invertible, what), best_residual_(best_residual) {}
  double best_residual() const noexcept { return best_residual_; }

 private:
  double best_residual_;
};

class AmbiguousRootsError : public Error {
 public:
  AmbiguousRootsError(const std::string& what, std::vector<InversionRoot> roots)
      : Error(ErrorCode::ambiguous_roots, what), roots_(std::move(roots)) {}
  const std::vector<InversionRoot>& roots() const noexcept { return roots_; }

 private:
  std::vector<InversionRoot> roots_;
};

/// Recovers (A, delta, rho, mu) from the first three slope coefficients and the
/// intercept by damped Newton iteration over a multi-start grid. Throws
/// NonInvertibleError when no admissible root exists and AmbiguousRootsError
/// when more than one does.
InversionResult invert_linearization(const LinearizationCoefficients& c,
                                     const InversionOptions& options = {});

}  // namespace ves
