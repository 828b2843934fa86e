#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "mmax/estimation.hpp"
#include "mmax/io.hpp"
#include "mmax/kernels.hpp"
#include "mmax/simulator.hpp"
#include "mmax/stats.hpp"
#include "mmax/types.hpp"

namespace mmax::cli {

/// One Monte-Carlo experiment: `runs` seeded simulate->estimate passes at the
/// configured (model, sites, n, k), with per-run seeds seed XOR run-index.
struct McSetup {
  KernelModel model;
  SiteSet sites;
  std::size_t n = 0;
  std::size_t k = 0;
  std::size_t runs = 0;
  std::uint64_t seed = 0;
  SimConfig sim;
  std::string estimator;  // pairwise | range | exp2d | general-normal
  int threads = 1;

  McSetup(KernelModel m, SiteSet s) : model(std::move(m)), sites(std::move(s)) {}
};

struct McRow {
  std::size_t run = 0;
  std::uint64_t seed = 0;
  bool failed = false;
  std::string error;
  double beta_hat = std::numeric_limits<double>::quiet_NaN();
  double sqrtk_err = std::numeric_limits<double>::quiet_NaN();
  double beta1_hat = std::numeric_limits<double>::quiet_NaN();
  double beta2_hat = std::numeric_limits<double>::quiet_NaN();
  double rho_hat = std::numeric_limits<double>::quiet_NaN();
  std::vector<double> pair_beta;  // per-pair estimates, pair order (j < m)
};

struct McPairSummary {
  std::size_t j = 0, m = 0;
  double dist = 0.0;
  double mean_sqrtk_err = 0.0;
  double var_sqrtk_err = 0.0;
  AndersonDarling ad;
  double var_delta = 0.0;  // predicted at the true parameters
  double var_paper = 0.0;
  std::string matched;  // which candidate brackets the empirical variance
};

struct McResult {
  std::string estimator;
  std::string model;
  std::size_t n = 0, k = 0, runs = 0, d = 0;
  std::uint64_t seed = 0;
  double true_beta = std::numeric_limits<double>::quiet_NaN();
  std::size_t failures = 0;
  std::vector<McRow> rows;
  std::vector<std::pair<std::size_t, std::size_t>> pair_index;  // (j, m) order
  // Averaged-estimator summary over successful runs (single-beta families).
  double mean_sqrtk_err = std::numeric_limits<double>::quiet_NaN();
  double var_sqrtk_err = std::numeric_limits<double>::quiet_NaN();
  AndersonDarling ad;
  std::vector<McPairSummary> pairs;
};

EstimateReport run_estimator(const ObservationMatrix& obs, const KernelModel& model,
                             const std::string& estimator, std::size_t k);

McResult run_mc(const McSetup& setup);

McSetup mc_setup_from_config(const Config& cfg);

void write_mc_csv(const std::string& path, const McResult& r);

}  // namespace mmax::cli
