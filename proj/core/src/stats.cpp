#include "ves/stats.hpp"

#include <boost/math/special_functions/beta.hpp>
#include <cmath>
#include <limits>

#include "ves/error.hpp"

namespace ves {

double student_t_two_sided_p(double t, double dof) {
  if (!(dof > 0.0)) throw Error(ErrorCode::insufficient_data, "t distribution needs dof > 0");
  if (std::isnan(t)) return std::numeric_limits<double>::quiet_NaN();
  if (std::isinf(t)) return 0.0;
  const double x = dof / (dof + t * t);
  return boost::math::ibeta(0.5 * dof, 0.5, x);
}

std::string significance_stars(double p_value) {
  if (std::isnan(p_value)) return "";
  if (p_value < 0.001) return "***";
  if (p_value < 0.01) return "**";
  if (p_value < 0.05) return "*";
  return "";
}

}  // namespace ves
