#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "mmax_cli/commands.hpp"

namespace {

struct CommonModelFlags {
  std::string model;
  double beta = 0.0;
  int nu = 0;
  double alpha = 0.0;
  bool has_beta = false, has_nu = false, has_alpha = false;

  void attach(CLI::App* app) {
    app->add_option("--model", model,
                    "normal1d | dexp1d | t1d | normal2d | exp2d | t2d | gnormal2d")
        ->required();
    app->add_option("--beta", beta, "kernel beta (marginal shape for t models)")
        ->each([this](const std::string&) { has_beta = true; });
    app->add_option("--nu", nu, "t1d degrees of freedom")->each([this](const std::string&) {
      has_nu = true;
    });
    app->add_option("--alpha", alpha, "t2d tail exponent (> 1)")
        ->each([this](const std::string&) { has_alpha = true; });
  }

  std::optional<double> beta_opt() const {
    return has_beta ? std::optional<double>(beta) : std::nullopt;
  }
  std::optional<int> nu_opt() const {
    return has_nu ? std::optional<int>(nu) : std::nullopt;
  }
  std::optional<double> alpha_opt() const {
    return has_alpha ? std::optional<double>(alpha) : std::nullopt;
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Stationary moving-maximum max-stable processes: simulation, "
               "bivariate distributions, and tail-dependence estimation"};
  app.require_subcommand(1);

  // simulate
  auto* sim = app.add_subcommand("simulate", "draw replications and write CSVs");
  std::string sim_config, sim_out = "sim";
  int sim_threads = 1;
  sim->add_option("--config", sim_config, "config with [model] [sites] [sim]")->required();
  sim->add_option("--out", sim_out, "output prefix (<out>_obs.csv, <out>_sites.csv)");
  sim->add_option("--threads", sim_threads, "worker threads (output is thread-invariant)");

  // dist
  auto* dist = app.add_subcommand("dist", "evaluate distributions on grids");
  std::string dist_config, dist_out = "dist.csv";
  dist->add_option("--config", dist_config, "config with [model] [dist]")->required();
  dist->add_option("--out", dist_out, "output CSV path");

  // estimate
  auto* est = app.add_subcommand("estimate", "rank-based beta estimation from CSVs");
  mmax::cli::EstimateArgs est_args;
  CommonModelFlags est_model;
  std::vector<std::size_t> est_ks;
  est->add_option("--obs", est_args.obs_path, "observations CSV")->required();
  est->add_option("--sites", est_args.sites_path, "sites CSV")->required();
  est_model.attach(est);
  est->add_option("--estimator", est_args.estimator,
                  "pairwise | range | exp2d | general-normal")
      ->required();
  est->add_option("--k", est_ks, "threshold count(s); repeat for a k grid")->required();
  est->add_option("--beta-max", est_args.beta_max, "exp2d bisection cap");
  est->add_option("--out", est_args.out_prefix, "output prefix")->default_val("estimate");

  // diagnose
  auto* diag = app.add_subcommand("diagnose", "model-vs-empirical R(1,1) per pair");
  mmax::cli::DiagnoseArgs diag_args;
  CommonModelFlags diag_model;
  double diag_beta1 = 0, diag_beta2 = 0, diag_rho = 0;
  bool has_b1 = false, has_b2 = false, has_rho = false;
  std::size_t diag_k = 0;
  diag->add_option("--obs", diag_args.obs_path, "observations CSV")->required();
  diag->add_option("--sites", diag_args.sites_path, "sites CSV")->required();
  diag_model.attach(diag);
  diag->add_option("--beta1", diag_beta1, "gnormal2d beta1")->each([&](const std::string&) {
    has_b1 = true;
  });
  diag->add_option("--beta2", diag_beta2, "gnormal2d beta2")->each([&](const std::string&) {
    has_b2 = true;
  });
  diag->add_option("--rho", diag_rho, "gnormal2d rho")->each([&](const std::string&) {
    has_rho = true;
  });
  diag->add_option("--k", diag_k, "threshold count")->required();
  diag->add_option("--out", diag_args.out_path, "output CSV")->default_val("diagnose.csv");

  // mc
  auto* mc = app.add_subcommand("mc", "seeded Monte-Carlo simulate->estimate experiment");
  std::string mc_config, mc_out = "mc";
  int mc_threads = 1;
  mc->add_option("--config", mc_config, "config with [model] [sites] [sim] [estimate] [mc]")
      ->required();
  mc->add_option("--out", mc_out, "output prefix (<out>_runs.csv, <out>_summary.json)");
  mc->add_option("--threads", mc_threads, "worker threads (row order is fixed)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (sim->parsed()) {
      mmax::cli::cmd_simulate(sim_config, sim_out, sim_threads, std::cout);
    } else if (dist->parsed()) {
      mmax::cli::cmd_dist(dist_config, dist_out, std::cout);
    } else if (est->parsed()) {
      est_args.model_name = est_model.model;
      est_args.beta = est_model.beta_opt();
      est_args.nu = est_model.nu_opt();
      est_args.alpha = est_model.alpha_opt();
      est_args.ks = est_ks;
      mmax::cli::cmd_estimate(est_args, std::cout);
    } else if (diag->parsed()) {
      diag_args.model_name = diag_model.model;
      diag_args.beta = diag_model.beta_opt();
      diag_args.nu = diag_model.nu_opt();
      diag_args.alpha = diag_model.alpha_opt();
      if (has_b1) diag_args.beta1 = diag_beta1;
      if (has_b2) diag_args.beta2 = diag_beta2;
      if (has_rho) diag_args.rho = diag_rho;
      diag_args.k = diag_k;
      mmax::cli::cmd_diagnose(diag_args, std::cout);
    } else if (mc->parsed()) {
      mmax::cli::cmd_mc(mc_config, mc_out, mc_threads, std::cout);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return mmax::cli::exit_code_for(e);
  }
  return mmax::cli::kExitOk;
}
