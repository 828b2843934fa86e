#include "mmax/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <thread>
#include <vector>

#include "mmax/error.hpp"
#include "mmax/rng.hpp"

namespace mmax {

void SimConfig::validate() const {
  if (!(tail_mass_tol > 0.0 && tail_mass_tol <= 1e-3))
    throw DomainError("SimConfig: tail_mass_tol must lie in (0, 1e-3]");
  if (max_points < 1000) throw DomainError("SimConfig: max_points must be at least 10^3");
  if (window_margin && !(*window_margin > 0.0))
    throw DomainError("SimConfig: window_margin must be positive or auto");
}

namespace {

struct Window {
  Point lo, hi;
  double area = 0.0;  // length in 1D
};

Window make_window(const KernelModel& model, const SiteSet& sites, const SimConfig& cfg,
                   double* margin_out) {
  const double r = cfg.window_margin ? *cfg.window_margin
                                     : model.tail_radius(cfg.tail_mass_tol);
  if (margin_out) *margin_out = r;
  Window w;
  double xlo = sites[0].x, xhi = sites[0].x, ylo = sites[0].y, yhi = sites[0].y;
  for (const Point& p : sites.points()) {
    xlo = std::min(xlo, p.x);
    xhi = std::max(xhi, p.x);
    ylo = std::min(ylo, p.y);
    yhi = std::max(yhi, p.y);
  }
  w.lo = {xlo - r, ylo - r};
  w.hi = {xhi + r, yhi + r};
  if (model.dimension() == 1) {
    w.lo.y = w.hi.y = 0.0;
    w.area = w.hi.x - w.lo.x;
  } else {
    w.area = (w.hi.x - w.lo.x) * (w.hi.y - w.lo.y);
  }
  return w;
}

// One replication: Poisson points on W x R+ realized in increasing intensity
// order (Y_j = Gamma_j / |W|), stopping once phi_max / Y_j can no longer beat
// the running minimum over sites. Exact on W.
std::uint64_t replicate(const KernelModel& model, const SiteSet& sites,
                        const Window& w, double phi_max, std::uint64_t max_points,
                        CounterRng rng, std::span<double> out) {
  const std::size_t d = sites.size();
  std::fill(out.begin(), out.end(), 0.0);
  const bool two_d = model.dimension() == 2;

  double gamma = 0.0;
  std::uint64_t points = 0;
  for (;;) {
    gamma += rng.next_exponential();
    if (++points > max_points)
      throw BudgetError("simulate: replication exceeded max_points before the "
                        "termination bound held");
    const double y = gamma / w.area;
    double running_min = out[0];
    for (std::size_t j = 1; j < d; ++j) running_min = std::min(running_min, out[j]);
    if (phi_max / y < running_min) break;

    Point p;
    p.x = w.lo.x + (w.hi.x - w.lo.x) * rng.next_uniform();
    if (two_d) p.y = w.lo.y + (w.hi.y - w.lo.y) * rng.next_uniform();
    for (std::size_t j = 0; j < d; ++j) {
      const Point& t = sites[j];
      const double v = model.density({p.x - t.x, p.y - t.y}) / y;
      if (v > out[j]) out[j] = v;
    }
  }
  return points;
}

}  // namespace

ObservationMatrix simulate(const KernelModel& model, const SiteSet& sites,
                           std::size_t n, const SimConfig& cfg, int threads,
                           SimStats* stats) {
  cfg.validate();
  if (model.dimension() != sites.dimension())
    throw DataError("simulate: kernel dimension (" +
                    std::to_string(model.dimension()) + ") does not match site dimension (" +
                    std::to_string(sites.dimension()) + ")");
  sites.require_distinct("simulate");
  if (n == 0) throw DomainError("simulate: n must be positive");

  double margin = 0.0;
  const Window w = make_window(model, sites, cfg, &margin);
  const double phi_max = model.max_density();

  ObservationMatrix obs(n, sites);
  std::vector<std::uint64_t> point_counts(n, 0);
  std::exception_ptr failure;

  auto run_block = [&](std::size_t i0, std::size_t i1) {
    try {
      for (std::size_t i = i0; i < i1; ++i) {
        auto row = std::span<double>(obs.data().data() + i * sites.size(), sites.size());
        point_counts[i] = replicate(model, sites, w, phi_max, cfg.max_points,
                                    CounterRng(cfg.seed, i), row);
      }
    } catch (...) {
      if (!failure) failure = std::current_exception();
    }
  };

  const int nthreads = std::max(1, std::min<int>(threads, static_cast<int>(n)));
  if (nthreads == 1) {
    run_block(0, n);
  } else {
    std::vector<std::thread> pool;
    const std::size_t chunk = (n + nthreads - 1) / nthreads;
    for (int t = 0; t < nthreads; ++t) {
      const std::size_t i0 = static_cast<std::size_t>(t) * chunk;
      const std::size_t i1 = std::min(n, i0 + chunk);
      if (i0 < i1) pool.emplace_back(run_block, i0, i1);
    }
    for (auto& th : pool) th.join();
  }
  if (failure) std::rethrow_exception(failure);

  if (stats) {
    stats->window_lo = w.lo;
    stats->window_hi = w.hi;
    stats->margin = margin;
    stats->total_points = 0;
    stats->max_points_per_replication = 0;
    for (std::uint64_t c : point_counts) {
      stats->total_points += c;
      stats->max_points_per_replication = std::max(stats->max_points_per_replication, c);
    }
  }
  return obs;
}

ObservationMatrix transform_to_gev(const ObservationMatrix& z,
                                   std::span<const double> gamma,
                                   std::span<const double> mu,
                                   std::span<const double> sigma) {
  const std::size_t d = z.cols();
  if (gamma.size() != d || mu.size() != d || sigma.size() != d)
    throw DataError("transform_to_gev: parameter vectors must have one entry per site");
  for (double s : sigma)
    if (!(s > 0.0)) throw DomainError("transform_to_gev: sigma must be positive");

  ObservationMatrix out(z.rows(), z.sites());
  for (std::size_t i = 0; i < z.rows(); ++i) {
    for (std::size_t j = 0; j < d; ++j) {
      const double x = z.at(i, j);
      if (!(x > 0.0))
        throw DomainError("transform_to_gev: inputs must be positive (Frechet support)");
      const double g = gamma[j];
      const double core = g == 0.0 ? std::log(x) : std::expm1(g * std::log(x)) / g;
      out.at(i, j) = mu[j] + sigma[j] * core;
    }
  }
  return out;
}

}  // namespace mmax
