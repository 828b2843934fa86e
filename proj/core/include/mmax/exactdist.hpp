#pragma once

#include <cstdint>

#include "mmax/kernels.hpp"
#include "mmax/types.hpp"

namespace mmax {

/// Support of the spectral measure in the angle theta = arctan(w2/w1),
/// with boundary atoms where the measure carries them. atom_mass is NaN for
/// the Student families (the atoms exist but have no closed-form size here).
struct SpectralSupport {
  double theta_lo = 0.0;
  double theta_hi = 0.0;
  bool has_atoms = false;
  double atom_mass = 0.0;
};

/// Closed-form bivariate tail dependence of (Z(0), Z(t)) for a kernel model
/// and a fixed displacement t. All piecewise region boundaries are cached at
/// construction. Pure value type, safe for concurrent use.
class PairDependence {
 public:
  PairDependence(const KernelModel& model, double t);          // 1D kernels
  PairDependence(const KernelModel& model, const Point& t);    // any kernel

  const KernelModel& model() const { return model_; }
  Point displacement() const { return t_; }
  double distance() const { return dist_; }
  bool complete_dependence() const { return dist_ == 0.0; }

  /// -log P{Z(0) <= w1, Z(t) <= w2}; lies in [max(1/w1,1/w2), 1/w1 + 1/w2].
  double neg_log_cdf(double w1, double w2) const;

  /// Tail dependence function L(x1, x2) = neg_log_cdf(1/x1, 1/x2), extended by
  /// continuity to a zero coordinate; homogeneous of degree 1.
  double L(double x1, double x2) const;

  /// R(x1, x2) = x1 + x2 - L(x1, x2); R(1,1) is the tail dependence
  /// coefficient lambda in [0, 1].
  double R(double x1, double x2) const;

  /// Dependence function chi with
  ///   neg_log_cdf(w1, w2) = 1/w1 + 1/w2 + (1/w2) chi(w2/w1).
  /// Defined for the 1D families; chi(s) lies in [-min(1,s), 0).
  double chi(double s) const;

  SpectralSupport spectral_support() const;

 private:
  double exp1d_neg_log(double w1, double w2) const;
  double hr_neg_log(double w1, double w2) const;
  double t1d_neg_log(double w1, double w2) const;
  double exp2d_neg_log(double w1, double w2) const;
  double t2d_neg_log(double w1, double w2) const;
  double t2d_disk_prob(double center_dist, double radius_sq, double center_sq_minus_radius_sq) const;

  KernelModel model_;
  Point t_{};
  double dist_ = 0.0;

  // Cached region boundaries.
  double hr_scale_ = 0.0;    // beta|t| resp. sqrt(t' Sigma^{-1} t)
  double exp_elo_ = 0.0;     // exp(-beta|t|), 1D exponential
  double tb1_ = 0.0;         // b_1 (< 1) and b_2 (> 1), Student families
  double tb2_ = 0.0;
  double t_ratio_lo_ = 0.0;  // w2/w1 support bounds for the Student families
  double t_ratio_hi_ = 0.0;
  double e2_a_ = 0.0;        // |t1|, |t2| and their combinations, 2D exponential
  double e2_b_ = 0.0;
};

/// d-site R(1,...,1) for the 1D kernels: 2(1 - F(beta * site range / 2)),
/// a function of the site range only. Requires d >= 2.
double r_multi_ones(const KernelModel& model, const SiteSet& sites);

/// Spectral density of the 1D exponential pair on its open support interval,
/// with equal-mass atoms at both endpoints.
class ExpSpectralDensity {
 public:
  double operator()(double theta) const;
  double theta_lo() const { return lo_; }
  double theta_hi() const { return hi_; }
  double atom_mass() const { return atom_; }

 private:
  friend ExpSpectralDensity exp1d_spectral_density(const PairDependence& pd);
  double coef_ = 0.0;
  double lo_ = 0.0, hi_ = 0.0;
  double atom_ = 0.0;
};
ExpSpectralDensity exp1d_spectral_density(const PairDependence& pd);

/// Spectral density of the 1D normal pair: atomless, supported on (0, pi/2).
class NormalSpectralDensity {
 public:
  double operator()(double theta) const;

 private:
  friend NormalSpectralDensity normal1d_spectral_density(const PairDependence& pd);
  double a_ = 0.0;  // beta|t|
};
NormalSpectralDensity normal1d_spectral_density(const PairDependence& pd);

/// Spectral density recovered numerically from the mixed second difference of
/// neg_log_cdf on the unit circle (one Richardson step from base step h);
/// agrees with the closed forms where they exist and is the only density
/// route for the Student families.
double numeric_spectral_density(const PairDependence& pd, double theta, double h = 1e-4);

struct McEstimate {
  double mean = 0.0;
  double std_error = 0.0;
};

/// Monte-Carlo check of the normal-pair identity
///   neg_log_cdf(w1, w2) = E max{1/w1, exp(N a - a^2/2)/w2},  N ~ N(0,1),
/// with a the pair scale. Deterministic for a fixed seed. Requires m >= 10^4.
McEstimate huesler_reiss_mc_check(const PairDependence& pd, double w1, double w2,
                                  std::size_t m, std::uint64_t seed);

}  // namespace mmax
