#pragma once

#include <span>

#include "mmax/kernels.hpp"
#include "mmax/types.hpp"

namespace mmax {

/// Brute-force numerical evaluation of the d-site tail dependence integrals
///   L(x) = integral of max_i x_i phi(s - t_i) ds,
///   R(x) = integral of min_i x_i phi(s - t_i) ds,
/// over R (1D kernels) or R^2 (2D kernels). These arbitrate every closed form.
///
/// l_numeric admits x_i = 0 (the site drops out); r_numeric requires all
/// x_i > 0. Throws AccuracyError with the achieved estimate attached when the
/// requested absolute tolerance cannot be reached.
double l_numeric(const KernelModel& model, const SiteSet& sites,
                 std::span<const double> x, double abs_tol = 1e-9);
double r_numeric(const KernelModel& model, const SiteSet& sites,
                 std::span<const double> x, double abs_tol = 1e-9);

}  // namespace mmax
