#pragma once

#include <functional>
#include <span>

namespace mmax {

struct MeanVariance {
  double mean = 0.0;
  double variance = 0.0;  // unbiased (n-1 denominator)
};

MeanVariance mean_variance(std::span<const double> x);

/// Anderson-Darling test of composite normality (mean and variance estimated
/// from the sample). The pass decision at a given level uses the standard
/// finite-sample adjustment of the critical value by 1 + 4/n - 25/n^2.
struct AndersonDarling {
  double a2 = 0.0;            // raw A^2 statistic
  double critical_1pct = 0.0; // adjusted critical value at the 1% level
  bool pass_1pct = false;
};

AndersonDarling anderson_darling_normal(std::span<const double> x);

/// One-sample Kolmogorov-Smirnov statistic against a given cdf, plus the
/// asymptotic critical value at a level in {0.01, 0.05}.
struct KolmogorovSmirnov {
  double statistic = 0.0;
  double critical = 0.0;
  bool pass = false;
};

KolmogorovSmirnov kolmogorov_smirnov(std::span<const double> x,
                                     const std::function<double(double)>& cdf,
                                     double level = 0.01);

}  // namespace mmax
