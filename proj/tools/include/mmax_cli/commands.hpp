#pragma once

#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "mmax_cli/mc.hpp"

namespace mmax::cli {

// Process exit codes of the mmax binary.
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitData = 3;
inline constexpr int kExitNumeric = 4;

int exit_code_for(const std::exception& e);

/// simulate: [model] + [sites] + [sim] config -> <prefix>_obs.csv,
/// <prefix>_sites.csv (optionally GEV-transformed via a [gev] section).
void cmd_simulate(const std::string& config_path, const std::string& out_prefix,
                  int threads, std::ostream& log);

/// dist: [model] + [dist] config -> grid CSV (w1,w2,neg_log_cdf or
/// theta,s_theta or s,chi).
void cmd_dist(const std::string& config_path, const std::string& out_path,
              std::ostream& log);

struct EstimateArgs {
  std::string obs_path;
  std::string sites_path;
  std::string model_name;
  std::optional<double> beta;
  std::optional<int> nu;
  std::optional<double> alpha;
  std::string estimator;
  std::vector<std::size_t> ks;  // one report per k
  double beta_max = 0.0;        // exp2d only; 0 = default
  std::string out_prefix;
};

/// estimate: observations + sites CSV -> <prefix>.json + <prefix>_pairs.csv
/// (suffixed _k<k> in k-grid mode).
void cmd_estimate(const EstimateArgs& args, std::ostream& log);

struct DiagnoseArgs {
  std::string obs_path;
  std::string sites_path;
  std::string model_name;
  std::optional<double> beta;
  std::optional<int> nu;
  std::optional<double> alpha;
  std::optional<double> beta1, beta2, rho;
  std::size_t k = 0;
  std::string out_path;
};

/// diagnose: per-pair model-vs-empirical R(1,1) gaps for a fitted model.
void cmd_diagnose(const DiagnoseArgs& args, std::ostream& log);

/// mc: seeded simulate->estimate experiment -> <prefix>_runs.csv +
/// <prefix>_summary.json.
void cmd_mc(const std::string& config_path, const std::string& out_prefix, int threads,
            std::ostream& log);

}  // namespace mmax::cli
