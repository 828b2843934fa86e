#include "mmax_cli/mc.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <thread>

#include "mmax/error.hpp"

namespace mmax::cli {

namespace {

std::string match_candidate(double empirical, double delta, double paper) {
  auto brackets = [&](double predicted) {
    return predicted > 0.0 && empirical >= 0.5 * predicted && empirical <= 2.0 * predicted;
  };
  const bool d = brackets(delta), p = brackets(paper);
  if (d && p)
    return std::fabs(std::log(empirical / delta)) <= std::fabs(std::log(empirical / paper))
               ? "delta"
               : "paper";
  if (d) return "delta";
  if (p) return "paper";
  return "none";
}

}  // namespace

EstimateReport run_estimator(const ObservationMatrix& obs, const KernelModel& model,
                             const std::string& estimator, std::size_t k) {
  if (estimator == "pairwise") return beta_hat_pairwise(obs, model, k);
  if (estimator == "range") return beta_hat_range(obs, model, k);
  if (estimator == "exp2d") return beta_hat_exp2d(obs, k);
  if (estimator == "general-normal") return general_normal_fit(obs, k);
  throw ConfigError("unknown estimator '" + estimator +
                    "' (expected pairwise | range | exp2d | general-normal)");
}

McResult run_mc(const McSetup& setup) {
  if (setup.runs == 0) throw ConfigError("mc: runs must be positive");
  if (setup.n == 0) throw ConfigError("mc: n must be positive");
  const bool gnormal = setup.model.family() == Family::GeneralNormal2D;

  McResult out;
  out.estimator = setup.estimator;
  out.model = setup.model.describe();
  out.n = setup.n;
  out.k = setup.k;
  out.runs = setup.runs;
  out.d = setup.sites.size();
  out.seed = setup.sim.seed;
  if (!gnormal) out.true_beta = setup.model.beta();
  for (std::size_t j = 0; j < setup.sites.size(); ++j)
    for (std::size_t m = j + 1; m < setup.sites.size(); ++m)
      out.pair_index.emplace_back(j, m);

  out.rows.assign(setup.runs, McRow{});
  const double sqrt_k = std::sqrt(static_cast<double>(setup.k));

  auto one_run = [&](std::size_t run) {
    McRow& row = out.rows[run];
    row.run = run;
    row.seed = setup.sim.seed ^ static_cast<std::uint64_t>(run);
    try {
      SimConfig sim = setup.sim;
      sim.seed = row.seed;
      const ObservationMatrix obs = simulate(setup.model, setup.sites, setup.n, sim);
      const EstimateReport rep = run_estimator(obs, setup.model, setup.estimator, setup.k);
      if (gnormal) {
        row.beta1_hat = rep.beta1_hat;
        row.beta2_hat = rep.beta2_hat;
        row.rho_hat = rep.rho_hat;
      } else {
        row.beta_hat = rep.beta_hat;
        row.sqrtk_err = sqrt_k * (rep.beta_hat - out.true_beta);
      }
      if (setup.estimator == "pairwise" || setup.estimator == "exp2d") {
        row.pair_beta.resize(rep.per_pair.size());
        for (std::size_t p = 0; p < rep.per_pair.size(); ++p)
          row.pair_beta[p] = rep.per_pair[p].beta_hat;
      }
    } catch (const std::exception& e) {
      row.failed = true;
      row.error = e.what();
    }
  };

  const int nthreads =
      std::max(1, std::min<int>(setup.threads, static_cast<int>(setup.runs)));
  if (nthreads == 1) {
    for (std::size_t r = 0; r < setup.runs; ++r) one_run(r);
  } else {
    // Rows are preallocated and written by run index; output is identical to
    // the serial order regardless of scheduling.
    std::vector<std::thread> pool;
    const std::size_t chunk = (setup.runs + nthreads - 1) / nthreads;
    for (int t = 0; t < nthreads; ++t) {
      const std::size_t r0 = static_cast<std::size_t>(t) * chunk;
      const std::size_t r1 = std::min(setup.runs, r0 + chunk);
      if (r0 < r1)
        pool.emplace_back([&, r0, r1] {
          for (std::size_t r = r0; r < r1; ++r) one_run(r);
        });
    }
    for (auto& th : pool) th.join();
  }

  for (const auto& row : out.rows)
    if (row.failed) ++out.failures;

  if (!gnormal) {
    std::vector<double> errs;
    for (const auto& row : out.rows)
      if (!row.failed && std::isfinite(row.sqrtk_err)) errs.push_back(row.sqrtk_err);
    if (errs.size() >= 8) {
      const MeanVariance mv = mean_variance(errs);
      out.mean_sqrtk_err = mv.mean;
      out.var_sqrtk_err = mv.variance;
      out.ad = anderson_darling_normal(errs);
    }
  }

  if (!gnormal && (setup.estimator == "pairwise" || setup.estimator == "exp2d")) {
    for (std::size_t p = 0; p < out.pair_index.size(); ++p) {
      std::vector<double> errs;
      for (const auto& row : out.rows)
        if (!row.failed && p < row.pair_beta.size() && std::isfinite(row.pair_beta[p]))
          errs.push_back(sqrt_k * (row.pair_beta[p] - out.true_beta));
      if (errs.size() < 8) continue;
      McPairSummary ps;
      ps.j = out.pair_index[p].first;
      ps.m = out.pair_index[p].second;
      const Point dt{setup.sites[ps.m].x - setup.sites[ps.j].x,
                     setup.sites[ps.m].y - setup.sites[ps.j].y};
      ps.dist = std::hypot(dt.x, dt.y);
      const MeanVariance mv = mean_variance(errs);
      ps.mean_sqrtk_err = mv.mean;
      ps.var_sqrtk_err = mv.variance;
      ps.ad = anderson_darling_normal(errs);
      const VarianceCandidates vc = asymptotic_variance_pair(PairDependence(setup.model, dt));
      ps.var_delta = vc.delta;
      ps.var_paper = vc.paper;
      ps.matched = match_candidate(mv.variance, vc.delta, vc.paper);
      out.pairs.push_back(std::move(ps));
    }
  }
  return out;
}

McSetup mc_setup_from_config(const Config& cfg) {
  const KernelModel model = parse_kernel(cfg);
  McSetup setup(model, parse_sites(cfg, model.dimension()));
  setup.sim = parse_sim_config(cfg);
  const long long n = cfg.get_int("sim", "n");
  if (n < 2) throw ConfigError("sim.n must be at least 2", cfg.line_of("sim", "n"));
  setup.n = static_cast<std::size_t>(n);
  cfg.restrict_keys("estimate", {"estimator", "k", "k_grid", "beta_max"});
  setup.estimator = cfg.get("estimate", "estimator");
  const long long k = cfg.get_int("estimate", "k");
  if (k < 1 || k >= n)
    throw ConfigError("estimate.k must satisfy 1 <= k < n", cfg.line_of("estimate", "k"));
  setup.k = static_cast<std::size_t>(k);
  cfg.restrict_keys("mc", {"runs"});
  const long long runs = cfg.get_int("mc", "runs");
  if (runs < 1) throw ConfigError("mc.runs must be positive", cfg.line_of("mc", "runs"));
  setup.runs = static_cast<std::size_t>(runs);
  return setup;
}

void write_mc_csv(const std::string& path, const McResult& r) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot open '" + path + "' for writing");
  const bool gnormal = !std::isfinite(r.true_beta);
  out << "run,seed,failed";
  if (gnormal) {
    out << ",beta1_hat,beta2_hat,rho_hat";
  } else {
    out << ",beta_hat,sqrtk_err";
    for (const auto& [j, m] : r.pair_index)
      if (!r.rows.empty() && !r.rows.front().pair_beta.empty())
        out << ",beta_hat_" << (j + 1) << "_" << (m + 1);
  }
  out << "\n";
  for (const auto& row : r.rows) {
    out << row.run << "," << row.seed << "," << (row.failed ? 1 : 0);
    if (gnormal) {
      out << "," << format_g17(row.beta1_hat) << "," << format_g17(row.beta2_hat) << ","
          << format_g17(row.rho_hat);
    } else {
      out << "," << format_g17(row.beta_hat) << "," << format_g17(row.sqrtk_err);
      for (double b : row.pair_beta) out << "," << format_g17(b);
    }
    out << "\n";
  }
  if (!out) throw DataError("write failed for '" + path + "'");
}

}  // namespace mmax::cli
