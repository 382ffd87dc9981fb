#include "ves/linearization.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <sstream>
#include <tuple>

namespace ves {

double LinearizationCoefficients::evaluate(double t) const {
  double acc = 0.0;
  for (std::size_t k = phi.size(); k-- > 0;) acc = (acc + phi[k]) * t;
  return intercept + acc;
}

double bernoulli_cumulant(std::size_t n, double q) {
  if (n == 0) throw Error(ErrorCode::invalid_parameter, "cumulant order starts at 1");
  // kappa_1 = q, kappa_{n+1} = q (1 - q) d kappa_n / dq, kept as a polynomial in q.
  std::vector<double> poly{0.0, 1.0};
  for (std::size_t order = 1; order < n; ++order) {
    std::vector<double> deriv(poly.size() > 1 ? poly.size() - 1 : 1, 0.0);
    for (std::size_t i = 1; i < poly.size(); ++i) deriv[i - 1] = static_cast<double>(i) * poly[i];
    std::vector<double> next(deriv.size() + 2, 0.0);
    for (std::size_t i = 0; i < deriv.size(); ++i) {
      next[i + 1] += deriv[i];
      next[i + 2] -= deriv[i];
    }
    poly = std::move(next);
  }
  double acc = 0.0;
  for (std::size_t i = poly.size(); i-- > 0;) acc = acc * q + poly[i];
  return acc;
}

LinearizationCoefficients linearize_ves(const VesParams& p, std::size_t degree) {
  validate_shape(p);
  if (degree < 1 || degree > kMaxLinearizationDegree) {
    throw Error(ErrorCode::invalid_parameter, "linearization degree must be in [1, 6]");
  }
  const double s = p.curvature_gap();
  const double q = 1.0 - p.delta;

  LinearizationCoefficients c;
  c.intercept = std::log(p.A);
  c.phi.resize(degree);
  double s_pow = 1.0;
  double factorial = 1.0;
  for (std::size_t k = 1; k <= degree; ++k) {
    s_pow *= s;
    factorial *= static_cast<double>(k);
    c.phi[k - 1] = (k == 1 ? 1.0 : 0.0) - s_pow * bernoulli_cumulant(k, q) / (p.rho * factorial);
  }
  return c;
}

namespace {

using Vec3 = Eigen::Vector3d;

struct Target {
  Vec3 phi;
  Vec3 scale;
};

// Model map (delta, rho, mu) -> (phi_1, phi_2, phi_3) and its Jacobian.
Vec3 model(const Vec3& x) {
  const double d = x[0], rho = x[1], mu = x[2];
  const double s = rho - mu * (1.0 + rho);
  const double q = d * (1.0 - d);
  return {1.0 - (1.0 - d) * s / rho, -q * s * s / (2.0 * rho),
          -q * (2.0 * d - 1.0) * s * s * s / (6.0 * rho)};
}

Eigen::Matrix3d jacobian(const Vec3& x) {
  const double d = x[0], rho = x[1], mu = x[2];
  const double s = rho - mu * (1.0 + rho);
  const double s_rho = 1.0 - mu;
  const double s_mu = -(1.0 + rho);
  const double q = d * (1.0 - d);
  const double q_d = 1.0 - 2.0 * d;
  const double r = q * (2.0 * d - 1.0);
  const double r_d = 2.0 * q - (2.0 * d - 1.0) * (2.0 * d - 1.0);

  Eigen::Matrix3d j;
  j(0, 0) = s / rho;
  j(0, 1) = -(1.0 - d) * (s_rho * rho - s) / (rho * rho);
  j(0, 2) = -(1.0 - d) * s_mu / rho;
  j(1, 0) = -q_d * s * s / (2.0 * rho);
  j(1, 1) = -q * (2.0 * s * s_rho * rho - s * s) / (2.0 * rho * rho);
  j(1, 2) = -q * s * s_mu / rho;
  j(2, 0) = -r_d * s * s * s / (6.0 * rho);
  j(2, 1) = -r * (3.0 * s * s * s_rho * rho - s * s * s) / (6.0 * rho * rho);
  j(2, 2) = -r * s * s * s_mu / (2.0 * rho);
  return j;
}

double residual_norm(const Vec3& x, const Target& t) {
  const Vec3 f = model(x) - t.phi;
  return f.cwiseQuotient(t.scale).cwiseAbs().maxCoeff();
}

bool in_domain(const Vec3& x) {
  return x.allFinite() && x[0] > 0.0 && x[0] < 1.0 && x[1] > -1.0 &&
         std::abs(x[1]) >= kRhoTolerance;
}

struct StartOutcome {
  Vec3 x;
  double residual;
  bool converged;
};

StartOutcome newton(Vec3 x, const Target& t, const InversionOptions& o) {
  double res = residual_norm(x, t);
  bool converged = res <= o.residual_tolerance;
  int polish = 0;
  for (int it = 0; it < o.max_iterations; ++it) {
    if (converged && ++polish > 3) break;
    const Eigen::Matrix3d j = jacobian(x);
    Eigen::FullPivLU<Eigen::Matrix3d> lu(j);
    if (!lu.isInvertible()) break;
    const Vec3 step = lu.solve(-(model(x) - t.phi));
    if (!step.allFinite()) break;

    double lambda = 1.0;
    bool accepted = false;
    for (int halving = 0; halving < 40; ++halving, lambda *= o.damping) {
      const Vec3 trial = x + lambda * step;
      if (!in_domain(trial)) continue;
      const double trial_res = residual_norm(trial, t);
      if (trial_res < res || (converged && trial_res <= res)) {
        x = trial;
        res = trial_res;
        accepted = true;
        break;
      }
    }
    if (!accepted) break;
    if (res <= o.residual_tolerance) converged = true;
  }
  return {x, res, converged};
}

bool admissible(const Vec3& x) { return in_domain(x) && x[2] > -1e-9; }

std::string describe(const VesParams& p) {
  std::ostringstream os;
  os.precision(12);
  os << "(A=" << p.A << ", delta=" << p.delta << ", rho=" << p.rho << ", mu=" << p.mu << ")";
  return os.str();
}

}  // namespace

InversionResult invert_linearization(const LinearizationCoefficients& c,
                                     const InversionOptions& o) {
  if (c.degree() < 3) {
    throw Error(ErrorCode::invalid_parameter,
                "inversion needs degree >= 3 (intercept and three slope coefficients)");
  }
  for (double v : c.phi) {
    if (!std::isfinite(v)) throw Error(ErrorCode::invalid_parameter, "non-finite coefficient");
  }
  if (!std::isfinite(c.intercept)) throw Error(ErrorCode::invalid_parameter, "non-finite intercept");
  const double A = std::exp(c.intercept);

  InversionResult result;
  if (std::abs(c.phi[1]) < o.degenerate_phi2) {
    const double gap = std::max(std::abs(c.phi[0] - 1.0), std::abs(c.phi[2]));
    if (gap <= 1e-10) {
      result.family = ConstrainedFamily{A};
      return result;
    }
    throw NonInvertibleError("phi_2 = 0 requires phi_1 = 1 and phi_3 = 0", gap);
  }

  Target target;
  target.phi = {c.phi[0], c.phi[1], c.phi[2]};
  target.scale = target.phi.cwiseAbs().cwiseMax(1.0);

  std::vector<InversionRoot> roots;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < o.delta_starts; ++i) {
    const double d0 = 0.05 + 0.9 * (static_cast<double>(i) + 0.5) / static_cast<double>(o.delta_starts);
    for (std::size_t k = 0; k < o.rho_starts; ++k) {
      const double rho0 = 0.1 + 2.9 * (static_cast<double>(k) + 0.5) / static_cast<double>(o.rho_starts);
      const double s0 = (1.0 - target.phi[0]) * rho0 / (1.0 - d0);
      const Vec3 x0{d0, rho0, (rho0 - s0) / (1.0 + rho0)};
      const StartOutcome out = newton(x0, target, o);
      best = std::min(best, out.residual);
      if (!out.converged || !admissible(out.x)) continue;

      VesParams p{A, out.x[0], out.x[1], std::max(out.x[2], 0.0)};
      const bool duplicate = std::any_of(roots.begin(), roots.end(), [&](InversionRoot& r) {
        const double dist = std::max({std::abs(r.params.delta - p.delta),
                                      std::abs(r.params.rho - p.rho), std::abs(r.params.mu - p.mu)});
        if (dist >= o.merge_distance) return false;
        if (out.residual < r.residual) r = {p, out.residual};
        return true;
      });
      if (!duplicate) roots.push_back({p, out.residual});
    }
  }

  std::sort(roots.begin(), roots.end(), [](const InversionRoot& a, const InversionRoot& b) {
    return std::tie(a.residual, a.params.delta, a.params.rho, a.params.mu) <
           std::tie(b.residual, b.params.delta, b.params.rho, b.params.mu);
  });

  if (roots.empty()) {
    std::ostringstream os;
    os << "no admissible root; best residual " << best;
    throw NonInvertibleError(os.str(), best);
  }
  if (roots.size() > 1) {
    std::ostringstream os;
    os << roots.size() << " admissible roots:";
    for (const auto& r : roots) os << ' ' << describe(r.params);
    throw AmbiguousRootsError(os.str(), std::move(roots));
  }
  result.root = roots.front();
  return result;
}

}  // namespace ves
