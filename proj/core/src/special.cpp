#include "mmax/special.hpp"

#include <boost/math/distributions/normal.hpp>
#include <boost/math/distributions/students_t.hpp>

#include "mmax/error.hpp"

namespace mmax::special {

namespace {

const boost::math::normal_distribution<double>& std_normal() {
  static const boost::math::normal_distribution<double> d(0.0, 1.0);
  return d;
}

boost::math::students_t_distribution<double> student(double dof) {
  if (!(dof > 0.0)) throw DomainError("student t: dof must be positive");
  return boost::math::students_t_distribution<double>(dof);
}

void check_prob(double p, const char* who) {
  if (!(p > 0.0 && p < 1.0)) throw DomainError(std::string(who) + ": probability must lie in (0,1)");
}

}  // namespace

double normal_pdf(double x) { return boost::math::pdf(std_normal(), x); }
double normal_cdf(double x) { return boost::math::cdf(std_normal(), x); }
double normal_sf(double x) { return boost::math::cdf(boost::math::complement(std_normal(), x)); }

double normal_quantile(double p) {
  check_prob(p, "normal_quantile");
  return boost::math::quantile(std_normal(), p);
}

double normal_sf_inv(double q) {
  check_prob(q, "normal_sf_inv");
  return boost::math::quantile(boost::math::complement(std_normal(), q));
}

double student_t_pdf(double dof, double x) { return boost::math::pdf(student(dof), x); }
double student_t_cdf(double dof, double x) { return boost::math::cdf(student(dof), x); }

double student_t_sf(double dof, double x) {
  return boost::math::cdf(boost::math::complement(student(dof), x));
}

double student_t_quantile(double dof, double p) {
  check_prob(p, "student_t_quantile");
  return boost::math::quantile(student(dof), p);
}

double student_t_sf_inv(double dof, double q) {
  check_prob(q, "student_t_sf_inv");
  return boost::math::quantile(boost::math::complement(student(dof), q));
}

}  // namespace mmax::special
