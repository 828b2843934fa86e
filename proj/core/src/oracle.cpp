#include "mmax/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

#include "mmax/error.hpp"
#include "mmax/quadrature.hpp"

namespace mmax {

namespace {

struct WeightedSites {
  std::vector<Point> pts;
  std::vector<double> w;
};

double integral_1d(const KernelModel& model, const WeightedSites& ws, double abs_tol,
                   bool use_min, const char* who) {
  std::vector<double> xs;
  xs.reserve(ws.pts.size());
  for (const auto& p : ws.pts) xs.push_back(p.x);
  const auto [lo_it, hi_it] = std::minmax_element(xs.begin(), xs.end());

  const double sum_w = std::accumulate(ws.w.begin(), ws.w.end(), 0.0);
  const double r = model.tail_radius(1e-12 / std::max(1.0, sum_w));
  const double a = *lo_it - r;
  const double b = *hi_it + r;
  const double scale = model.tail_radius(0.1);

  auto f = [&](double s) {
    double v = use_min ? std::numeric_limits<double>::infinity() : 0.0;
    for (std::size_t i = 0; i < ws.pts.size(); ++i) {
      const double d = ws.w[i] * model.density(s - ws.pts[i].x);
      v = use_min ? std::min(v, d) : std::max(v, d);
    }
    return v;
  };

  const auto breaks = geometric_knots(a, b, xs, scale);
  return integrate_or_throw(f, a, b, {abs_tol, 60000}, breaks, who);
}

double integral_2d(const KernelModel& model, const WeightedSites& ws, double abs_tol,
                   bool use_min, const char* who) {
  std::vector<double> xs, ys;
  for (const auto& p : ws.pts) {
    xs.push_back(p.x);
    ys.push_back(p.y);
  }
  const auto [xlo, xhi] = std::minmax_element(xs.begin(), xs.end());
  const auto [ylo, yhi] = std::minmax_element(ys.begin(), ys.end());

  const double sum_w = std::accumulate(ws.w.begin(), ws.w.end(), 0.0);
  const double r = model.tail_radius(1e-12 / std::max(1.0, sum_w));
  const double ax = *xlo - r, bx = *xhi + r;
  const double ay = *ylo - r, by = *yhi + r;
  const double scale = model.tail_radius(0.1);

  // Inner errors accumulate over the x-extent where the slice integrals are
  // not negligible; budget against that extent rather than the full window.
  const double active_x = std::min(bx - ax, (*xhi - *xlo) + 16.0 * scale);
  const double inner_tol =
      std::max(std::min(0.25 * abs_tol / active_x, 0.5 * abs_tol), 1e-15);

  const auto inner_breaks = geometric_knots(ay, by, ys, scale);
  const auto outer_breaks = geometric_knots(ax, bx, xs, scale);

  auto slice = [&](double u1) {
    auto f = [&](double u2) {
      double v = use_min ? std::numeric_limits<double>::infinity() : 0.0;
      for (std::size_t i = 0; i < ws.pts.size(); ++i) {
        const double d =
            ws.w[i] * model.density({u1 - ws.pts[i].x, u2 - ws.pts[i].y});
        v = use_min ? std::min(v, d) : std::max(v, d);
      }
      return v;
    };
    return integrate_or_throw(f, ay, by, {inner_tol, 4000}, inner_breaks, who);
  };

  return integrate_or_throw(slice, ax, bx, {0.5 * abs_tol, 4000}, outer_breaks, who);
}

double oracle_integral(const KernelModel& model, const SiteSet& sites,
                       std::span<const double> x, double abs_tol, bool use_min,
                       const char* who) {
  if (sites.size() != x.size())
    throw DataError(std::string(who) + ": weight count must match site count");
  if (sites.dimension() != model.dimension())
    throw DataError(std::string(who) + ": site dimension must match kernel dimension");

  WeightedSites ws;
  double sum = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] >= 0.0) || !std::isfinite(x[i]))
      throw DomainError(std::string(who) + ": weights must be finite and nonnegative");
    if (use_min && !(x[i] > 0.0))
      throw DomainError(std::string(who) + ": all weights must be positive");
    sum += x[i];
    if (x[i] > 0.0) {
      ws.pts.push_back(sites[i]);
      ws.w.push_back(x[i]);
    }
  }
  if (!(sum > 0.0)) throw DomainError(std::string(who) + ": some weight must be positive");

  if (model.dimension() == 1) return integral_1d(model, ws, abs_tol, use_min, who);
  return integral_2d(model, ws, abs_tol, use_min, who);
}

}  // namespace

double l_numeric(const KernelModel& model, const SiteSet& sites,
                 std::span<const double> x, double abs_tol) {
  return oracle_integral(model, sites, x, abs_tol, /*use_min=*/false, "l_numeric");
}

double r_numeric(const KernelModel& model, const SiteSet& sites,
                 std::span<const double> x, double abs_tol) {
  return oracle_integral(model, sites, x, abs_tol, /*use_min=*/true, "r_numeric");
}

}  // namespace mmax
