#pragma once

namespace mmax::special {

// Standard normal distribution.
double normal_pdf(double x);
double normal_cdf(double x);
double normal_sf(double x);  // 1 - cdf without cancellation
double normal_quantile(double p);
double normal_sf_inv(double q);  // x with sf(x) = q

// Student t with (possibly non-integer) dof > 0, scale 1.
double student_t_pdf(double dof, double x);
double student_t_cdf(double dof, double x);
double student_t_sf(double dof, double x);
double student_t_quantile(double dof, double p);
double student_t_sf_inv(double dof, double q);

}  // namespace mmax::special
