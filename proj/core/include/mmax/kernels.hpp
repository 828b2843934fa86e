#pragma once

#include <string>

#include "mmax/types.hpp"

namespace mmax {

enum class Family {
  Normal1D,
  DoubleExp1D,
  StudentT1D,
  Normal2D,
  Exp2D,
  StudentT2D,
  GeneralNormal2D,
};

const char* family_name(Family f);
int family_dimension(Family f);

/// One of the moving-maximum kernels: a unimodal probability density phi on R
/// or R^2 together with its dependence-strength parameter(s). Small beta means
/// strong spatial dependence, large beta weak dependence.
///
/// Every single-beta family satisfies the scaling identity
///   phi_beta(u) = beta^dim * phi_1(beta * u),
/// and phi_1 is the standardized kernel whose (scalar) marginal cdf F and
/// quantile F^{-1} drive the rank-based estimators.
class KernelModel {
 public:
  static KernelModel normal1d(double beta);
  static KernelModel double_exp1d(double beta);
  static KernelModel student_t1d(double beta, int nu);
  static KernelModel normal2d(double beta);
  static KernelModel exp2d(double beta);
  static KernelModel student_t2d(double beta, double alpha);
  static KernelModel general_normal2d(double beta1, double beta2, double rho);

  Family family() const { return family_; }
  int dimension() const { return family_dimension(family_); }
  std::string describe() const;

  double beta() const;   // single-beta families
  int nu() const;        // StudentT1D
  double alpha() const;  // StudentT2D
  double beta1() const;  // GeneralNormal2D
  double beta2() const;
  double rho() const;

  double density(const Point& u) const;
  double density(double x) const;  // 1D families
  double max_density() const;      // phi at the mode (the origin)

  /// sqrt(t' Sigma^{-1} t) for GeneralNormal2D, beta*|t| for the other normal
  /// families; the argument of the bivariate normal-type distribution.
  double normal_pair_scale(const Point& t) const;

  /// Families with a scalar standardized marginal; everything except
  /// GeneralNormal2D (whose estimation path never uses a scalar F).
  bool has_scalar_marginal() const { return family_ != Family::GeneralNormal2D; }

  // Standardized (beta = 1) marginal distribution F and friends.
  double marginal_cdf(double u) const;
  double marginal_sf(double u) const;
  double marginal_pdf(double u) const;
  double marginal_quantile(double p) const;
  double marginal_sf_inv(double q) const;

  /// Radius r with P{|X| > r} <= eps for X distributed per this kernel.
  double tail_radius(double eps) const;

  /// Same family and shape parameters, different beta (single-beta families).
  KernelModel with_beta(double beta) const;

 private:
  KernelModel(Family f) : family_(f) {}

  Family family_;
  double beta_ = 0.0;   // also beta1 for GeneralNormal2D
  double beta2_ = 0.0;
  double rho_ = 0.0;
  double alpha_ = 0.0;
  int nu_ = 0;
};

}  // namespace mmax
