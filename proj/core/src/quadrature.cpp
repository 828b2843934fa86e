#include "mmax/quadrature.hpp"

namespace mmax {

std::vector<double> geometric_knots(double a, double b, std::span<const double> centers,
                                    double scale) {
  std::vector<double> knots(centers.begin(), centers.end());
  if (centers.empty() || !(scale > 0.0)) return knots;
  double lo = centers[0], hi = centers[0];
  for (double c : centers) {
    lo = std::min(lo, c);
    hi = std::max(hi, c);
  }
  for (double step = scale; hi + step < b || lo - step > a; step *= 2.0) {
    if (hi + step < b) knots.push_back(hi + step);
    if (lo - step > a) knots.push_back(lo - step);
    if (step > 0.25 * std::numeric_limits<double>::max()) break;
  }
  return knots;
}

}  // namespace mmax
