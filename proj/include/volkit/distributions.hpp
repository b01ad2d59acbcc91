#pragma once

namespace volkit {

/// Upper tail Pr(X > x) for X ~ chi-square(df). Returns 1 for x <= 0.
double chi_square_sf(double x, double df);
/// Two-sided Pr(|T| > |t|) for T ~ Student-t(df).
double student_t_two_sided(double t, double df);
/// Two-sided Pr(|Z| > |z|) for Z ~ N(0,1).
double normal_two_sided(double z);
/// Inverse of the chi-square upper tail.
double chi_square_isf(double p, double df);

}  // namespace volkit
