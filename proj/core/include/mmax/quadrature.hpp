#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <span>
#include <vector>

#include "mmax/error.hpp"

namespace mmax {

struct QuadratureOptions {
  double abs_tol = 1e-10;
  int max_panels = 20000;
};

struct QuadratureResult {
  double value = 0.0;
  double abs_error = 0.0;
  int panels = 0;
  bool converged = false;
};

namespace detail {

// Gauss-Kronrod 7-15 nodes and weights on [-1, 1].
inline constexpr double kXgk[8] = {
    0.991455371120813, 0.949107912342759, 0.864864423359769, 0.741531185599394,
    0.586087235467691, 0.405845151377397, 0.207784955007898, 0.000000000000000};
inline constexpr double kWgk[8] = {
    0.022935322010529, 0.063092092629979, 0.104790010322250, 0.140653259715525,
    0.169004726639267, 0.190350578064785, 0.204432940075298, 0.209482141084728};
inline constexpr double kWg[4] = {
    0.129484966168870, 0.279705391489277, 0.381830050505119, 0.417959183673469};

struct Panel {
  double a, b;
  double value;
  double error;
};

template <typename F>
Panel gk15(const F& f, double a, double b) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  const double fc = f(c);
  double resk = kWgk[7] * fc;
  double resg = kWg[3] * fc;
  double resabs = kWgk[7] * std::fabs(fc);
  double fv1[7], fv2[7];
  for (int j = 0; j < 7; ++j) {
    const double dx = h * kXgk[j];
    fv1[j] = f(c - dx);
    fv2[j] = f(c + dx);
    const double fsum = fv1[j] + fv2[j];
    resk += kWgk[j] * fsum;
    if (j % 2 == 1) resg += kWg[(j - 1) / 2] * fsum;
    resabs += kWgk[j] * (std::fabs(fv1[j]) + std::fabs(fv2[j]));
  }
  const double reskh = 0.5 * resk;
  double resasc = kWgk[7] * std::fabs(fc - reskh);
  for (int j = 0; j < 7; ++j)
    resasc += kWgk[j] * (std::fabs(fv1[j] - reskh) + std::fabs(fv2[j] - reskh));
  const double ah = std::fabs(h);
  resabs *= ah;
  resasc *= ah;
  double err = std::fabs((resk - resg) * h);
  if (resasc != 0.0 && err != 0.0)
    err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
  const double eps = std::numeric_limits<double>::epsilon();
  if (resabs > std::numeric_limits<double>::min() / (50.0 * eps))
    err = std::max(err, 50.0 * eps * resabs);
  return {a, b, resk * h, err};
}

}  // namespace detail

/// Adaptive Gauss-Kronrod integration of f over [a, b]. `breakpoints`
/// pre-splits the interval (kink locations, geometric tail knots); points
/// outside (a, b) are ignored. The globally worst panel is bisected until the
/// total error estimate meets abs_tol or the panel budget runs out.
template <typename F>
QuadratureResult integrate(const F& f, double a, double b,
                           const QuadratureOptions& opt = {},
                           std::span<const double> breakpoints = {}) {
  QuadratureResult out;
  if (a == b) {
    out.converged = true;
    return out;
  }

  std::vector<double> knots;
  knots.push_back(a);
  for (double x : breakpoints)
    if (x > a && x < b) knots.push_back(x);
  knots.push_back(b);
  std::sort(knots.begin(), knots.end());
  knots.erase(std::unique(knots.begin(), knots.end()), knots.end());

  std::vector<detail::Panel> panels;
  panels.reserve(knots.size() + 64);
  for (std::size_t i = 0; i + 1 < knots.size(); ++i)
    panels.push_back(detail::gk15(f, knots[i], knots[i + 1]));

  auto cmp = [&panels](int i, int j) { return panels[i].error < panels[j].error; };
  std::priority_queue<int, std::vector<int>, decltype(cmp)> worst(cmp);
  double total_err = 0.0;
  for (std::size_t i = 0; i < panels.size(); ++i) {
    total_err += panels[i].error;
    worst.push(static_cast<int>(i));
  }

  while (total_err > opt.abs_tol &&
         static_cast<int>(panels.size()) < opt.max_panels && !worst.empty()) {
    const int i = worst.top();
    worst.pop();
    const detail::Panel p = panels[i];
    const double mid = 0.5 * (p.a + p.b);
    if (mid <= p.a || mid >= p.b) continue;  // interval at rounding resolution
    detail::Panel left = detail::gk15(f, p.a, mid);
    detail::Panel right = detail::gk15(f, mid, p.b);
    total_err += left.error + right.error - p.error;
    panels[i] = left;
    panels.push_back(right);
    worst.push(i);
    worst.push(static_cast<int>(panels.size()) - 1);
  }

  // Deterministic compensated summation in spatial order.
  std::sort(panels.begin(), panels.end(),
            [](const detail::Panel& x, const detail::Panel& y) { return x.a < y.a; });
  double sum = 0.0, comp = 0.0;
  for (const auto& p : panels) {
    const double y = p.value - comp;
    const double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
  }

  out.value = sum;
  out.abs_error = total_err;
  out.panels = static_cast<int>(panels.size());
  out.converged = total_err <= opt.abs_tol;
  return out;
}

template <typename F>
double integrate_or_throw(const F& f, double a, double b, const QuadratureOptions& opt,
                          std::span<const double> breakpoints, const char* what) {
  const QuadratureResult r = integrate(f, a, b, opt, breakpoints);
  if (!r.converged) throw AccuracyError(what, r.value, r.abs_error);
  return r.value;
}

/// Initial panel knots for an integrand with O(scale) features near `centers`
/// and smooth decay toward [a, b]: each center, plus geometric knots marching
/// outward from the span of the centers. Keeps kinks on panel boundaries and
/// prevents the error estimator from sampling a wide tail panel too sparsely.
std::vector<double> geometric_knots(double a, double b, std::span<const double> centers,
                                    double scale);

}  // namespace mmax
