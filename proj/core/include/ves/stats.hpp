#pragma once

#include <string>

namespace ves {

/// Two-sided Student-t tail probability P(|T| >= |t|) with `dof` degrees of
/// freedom, through the regularized incomplete beta function.
double student_t_two_sided_p(double t, double dof);

/// "***" below 0.001, "**" below 0.01, "*" below 0.05, else "".
std::string significance_stars(double p_value);

}  // namespace ves
