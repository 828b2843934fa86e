#include "mmax/stats.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "mmax/error.hpp"
#include "mmax/special.hpp"

namespace mmax {

MeanVariance mean_variance(std::span<const double> x) {
  if (x.size() < 2) throw DomainError("mean_variance: need at least two values");
  double mean = 0.0, m2 = 0.0;
  std::size_t k = 0;
  for (double v : x) {
    ++k;
    const double d = v - mean;
    mean += d / static_cast<double>(k);
    m2 += d * (v - mean);
  }
  return {mean, m2 / static_cast<double>(x.size() - 1)};
}

AndersonDarling anderson_darling_normal(std::span<const double> x) {
  const std::size_t n = x.size();
  if (n < 8) throw DomainError("anderson_darling_normal: need at least 8 values");
  const MeanVariance mv = mean_variance(x);
  const double sd = std::sqrt(mv.variance);
  if (!(sd > 0.0)) throw DomainError("anderson_darling_normal: zero sample variance");

  std::vector<double> z(x.begin(), x.end());
  for (double& v : z) v = (v - mv.mean) / sd;
  std::sort(z.begin(), z.end());

  double s = 0.0;
  const double dn = static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double lo = std::log(special::normal_cdf(z[i]));
    const double hi = std::log(special::normal_sf(z[n - 1 - i]));
    s += (2.0 * static_cast<double>(i) + 1.0) * (lo + hi);
  }
  AndersonDarling ad;
  ad.a2 = -dn - s / dn;
  // Composite-normality critical value at 1%, adjusted for sample size.
  ad.critical_1pct = 1.092 / (1.0 + 4.0 / dn - 25.0 / (dn * dn));
  ad.pass_1pct = ad.a2 < ad.critical_1pct;
  return ad;
}

KolmogorovSmirnov kolmogorov_smirnov(std::span<const double> x,
                                     const std::function<double(double)>& cdf,
                                     double level) {
  const std::size_t n = x.size();
  if (n == 0) throw DomainError("kolmogorov_smirnov: empty sample");
  std::vector<double> s(x.begin(), x.end());
  std::sort(s.begin(), s.end());
  double d = 0.0;
  const double dn = static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double f = cdf(s[i]);
    d = std::max(d, std::fabs(f - static_cast<double>(i) / dn));
    d = std::max(d, std::fabs(static_cast<double>(i + 1) / dn - f));
  }
  double k;  // asymptotic Kolmogorov quantile
  if (level == 0.05) k = 1.3581015;
  else if (level == 0.01) k = 1.6276236;
  else throw DomainError("kolmogorov_smirnov: supported levels are 0.01 and 0.05");
  KolmogorovSmirnov out;
  out.statistic = d;
  out.critical = k / std::sqrt(dn);
  out.pass = d < out.critical;
  return out;
}

}  // namespace mmax
