#pragma once

#include <cstdint>
#include <optional>
#include <span>

#include "mmax/kernels.hpp"
#include "mmax/types.hpp"

namespace mmax {

struct SimConfig {
  std::uint64_t seed = 0;
  /// Window expansion beyond the site hull; std::nullopt means `auto`
  /// (computed from tail_mass_tol by inverting the kernel tail).
  std::optional<double> window_margin;
  /// Kernel mass allowed outside the simulation window, per site.
  double tail_mass_tol = 1e-8;
  /// Cap on Poisson points per replication; exceeding it is an error, the
  /// sampler never truncates silently.
  std::uint64_t max_points = 10'000'000;

  void validate() const;
};

struct SimStats {
  Point window_lo;
  Point window_hi;
  double margin = 0.0;
  std::uint64_t total_points = 0;
  std::uint64_t max_points_per_replication = 0;
};

/// Draw n independent replications of (Z(t_1), ..., Z(t_d)) for the simple
/// max-stable moving-maximum process with the given kernel. Marginals are
/// standard Frechet exp(-1/x). Each replication owns a counter-based stream
/// keyed by (seed, replication index), so output is bit-identical for any
/// worker count.
ObservationMatrix simulate(const KernelModel& model, const SiteSet& sites,
                           std::size_t n, const SimConfig& cfg, int threads = 1,
                           SimStats* stats = nullptr);

/// Componentwise map to GEV margins: x -> mu + sigma (x^gamma - 1)/gamma,
/// with the gamma = 0 column read as mu + sigma log x. Preserves column
/// rank order; requires positive inputs.
ObservationMatrix transform_to_gev(const ObservationMatrix& z,
                                   std::span<const double> gamma,
                                   std::span<const double> mu,
                                   std::span<const double> sigma);

}  // namespace mmax
