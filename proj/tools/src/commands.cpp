#include "mmax_cli/commands.hpp"

#include <cmath>
#include <fstream>
#include <vector>

#include "mmax/error.hpp"
#include "mmax/exactdist.hpp"
#include "mmax/io.hpp"
#include "mmax/oracle.hpp"
#include "mmax_cli/report_json.hpp"

namespace mmax::cli {

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const ConfigError*>(&e)) return kExitConfig;
  if (dynamic_cast<const DomainError*>(&e)) return kExitConfig;
  if (dynamic_cast<const DataError*>(&e)) return kExitData;
  if (dynamic_cast<const DesignDeficiencyError*>(&e)) return kExitData;
  if (dynamic_cast<const Error*>(&e)) return kExitNumeric;
  return 1;
}

namespace {

KernelModel model_from_flags(const std::string& name, std::optional<double> beta,
                             std::optional<int> nu, std::optional<double> alpha,
                             std::optional<double> beta1 = std::nullopt,
                             std::optional<double> beta2 = std::nullopt,
                             std::optional<double> rho = std::nullopt) {
  try {
    return parse_kernel_args(name, beta, nu, alpha, beta1, beta2, rho);
  } catch (const DomainError& e) {
    throw ConfigError(e.what());
  }
}

Point parse_displacement(const Config& cfg, int dimension) {
  const auto vals = cfg.get_double_list("dist", "displacement");
  const int line = cfg.line_of("dist", "displacement");
  if (dimension == 1) {
    if (vals.size() != 1)
      throw ConfigError("dist.displacement must be a single value for a 1D model", line);
    return {vals[0], 0.0};
  }
  if (vals.size() != 2)
    throw ConfigError("dist.displacement must be 'dx, dy' for a 2D model", line);
  return {vals[0], vals[1]};
}

}  // namespace

void cmd_simulate(const std::string& config_path, const std::string& out_prefix,
                  int threads, std::ostream& log) {
  const Config cfg = Config::parse_file(config_path);
  const KernelModel model = parse_kernel(cfg);
  const SiteSet sites = parse_sites(cfg, model.dimension());
  const SimConfig sim = parse_sim_config(cfg);
  const long long n = cfg.get_int("sim", "n");
  if (n < 1) throw ConfigError("sim.n must be positive", cfg.line_of("sim", "n"));

  SimStats stats;
  ObservationMatrix obs =
      simulate(model, sites, static_cast<std::size_t>(n), sim, threads, &stats);

  if (cfg.has_section("gev")) {
    cfg.restrict_keys("gev", {"gamma", "mu", "sigma"});
    const auto gamma = cfg.get_double_list("gev", "gamma");
    const auto mu = cfg.get_double_list("gev", "mu");
    const auto sigma = cfg.get_double_list("gev", "sigma");
    obs = transform_to_gev(obs, gamma, mu, sigma);
  }

  const std::string obs_path = out_prefix + "_obs.csv";
  const std::string sites_path = out_prefix + "_sites.csv";
  write_observations_csv(obs_path, obs);
  write_sites_csv(sites_path, sites);

  log << "simulate: model=" << model.describe() << " d=" << sites.size() << " n=" << n
      << " seed=" << sim.seed << " window_margin=" << stats.margin
      << " points_total=" << stats.total_points
      << " points_max_per_rep=" << stats.max_points_per_replication << "\n"
      << "wrote " << obs_path << " and " << sites_path << "\n";
}

void cmd_dist(const std::string& config_path, const std::string& out_path,
              std::ostream& log) {
  const Config cfg = Config::parse_file(config_path);
  const KernelModel model = parse_kernel(cfg);
  cfg.restrict_keys("dist", {"op", "displacement", "w1", "w2", "theta", "s", "oracle"});
  const std::string op = cfg.get_or("dist", "op", "neglog");
  const Point dt = parse_displacement(cfg, model.dimension());

  std::ofstream out(out_path);
  if (!out) throw DataError("cannot open '" + out_path + "' for writing");

  if (op == "neglog") {
    const bool use_oracle = cfg.get_or("dist", "oracle", "false") == "true";
    const auto w1s = cfg.get_double_list("dist", "w1");
    const auto w2s = cfg.get_double_list("dist", "w2");
    const PairDependence pd(model, dt);
    SiteSet sites = model.dimension() == 1
                        ? SiteSet::line({0.0, dt.x})
                        : SiteSet::plane({{0.0, 0.0}, {dt.x, dt.y}});
    out << "w1,w2,neg_log_cdf\n";
    for (double w1 : w1s) {
      for (double w2 : w2s) {
        double v;
        if (use_oracle) {
          const double x[2] = {1.0 / w1, 1.0 / w2};
          v = l_numeric(model, sites, x);
        } else {
          v = pd.neg_log_cdf(w1, w2);
        }
        out << format_g17(w1) << "," << format_g17(w2) << "," << format_g17(v) << "\n";
      }
    }
  } else if (op == "spectral" || op == "numeric-spectral") {
    const auto thetas = cfg.get_double_list("dist", "theta");
    const PairDependence pd(model, dt);
    out << "theta,s_theta\n";
    for (double th : thetas) {
      double v;
      if (op == "numeric-spectral") {
        v = numeric_spectral_density(pd, th);
      } else if (model.family() == Family::DoubleExp1D) {
        v = exp1d_spectral_density(pd)(th);
      } else if (model.family() == Family::Normal1D) {
        v = normal1d_spectral_density(pd)(th);
      } else {
        throw ConfigError("dist.op=spectral has closed forms for dexp1d and normal1d "
                          "only; use op=numeric-spectral");
      }
      out << format_g17(th) << "," << format_g17(v) << "\n";
    }
  } else if (op == "chi") {
    const auto ss = cfg.get_double_list("dist", "s");
    const PairDependence pd(model, dt);
    out << "s,chi\n";
    for (double s : ss)
      out << format_g17(s) << "," << format_g17(pd.chi(s)) << "\n";
  } else {
    throw ConfigError("unknown dist.op '" + op +
                      "' (expected neglog | spectral | numeric-spectral | chi)");
  }
  if (!out) throw DataError("write failed for '" + out_path + "'");
  log << "dist: wrote " << out_path << "\n";
}

void cmd_estimate(const EstimateArgs& args, std::ostream& log) {
  if (args.ks.empty()) throw ConfigError("estimate: at least one k is required");
  const KernelModel model =
      model_from_flags(args.model_name, args.beta, args.nu, args.alpha);
  const ObservationMatrix obs = read_observations_csv(args.obs_path, args.sites_path);

  const bool grid = args.ks.size() > 1;
  for (std::size_t k : args.ks) {
    EstimateReport rep;
    if (args.estimator == "exp2d" && args.beta_max > 0.0)
      rep = beta_hat_exp2d(obs, k, args.beta_max);
    else
      rep = run_estimator(obs, model, args.estimator, k);
    const std::string stem =
        grid ? args.out_prefix + "_k" + std::to_string(k) : args.out_prefix;
    write_json(stem + ".json", report_to_json(rep));
    write_pairs_csv(stem + "_pairs.csv", rep);
    log << "estimate: k=" << k << " estimator=" << rep.estimator;
    if (std::isfinite(rep.beta_hat)) log << " beta_hat=" << rep.beta_hat;
    if (std::isfinite(rep.beta1_hat))
      log << " beta1_hat=" << rep.beta1_hat << " beta2_hat=" << rep.beta2_hat
          << " rho_hat=" << rep.rho_hat;
    log << " excluded=" << rep.excluded_independent << " wrote " << stem << ".json\n";
  }
}

void cmd_diagnose(const DiagnoseArgs& args, std::ostream& log) {
  const KernelModel fitted = model_from_flags(args.model_name, args.beta, args.nu,
                                              args.alpha, args.beta1, args.beta2, args.rho);
  const ObservationMatrix obs = read_observations_csv(args.obs_path, args.sites_path);
  const auto rows = model_diagnostic(obs, fitted, args.k);

  std::ofstream out(args.out_path);
  if (!out) throw DataError("cannot open '" + args.out_path + "' for writing");
  out << "j,m,distance,R_hat,model_R,gap\n";
  double worst = 0.0;
  for (const auto& r : rows) {
    out << (r.j + 1) << "," << (r.m + 1) << "," << format_g17(r.dist) << ","
        << format_g17(r.r_hat) << "," << format_g17(r.model_r) << ","
        << format_g17(r.gap) << "\n";
    worst = std::max(worst, std::fabs(r.gap));
  }
  if (!out) throw DataError("write failed for '" + args.out_path + "'");
  log << "diagnose: model=" << fitted.describe() << " k=" << args.k
      << " pairs=" << rows.size() << " max_abs_gap=" << worst << " wrote "
      << args.out_path << "\n";
}

void cmd_mc(const std::string& config_path, const std::string& out_prefix, int threads,
            std::ostream& log) {
  const Config cfg = Config::parse_file(config_path);
  McSetup setup = mc_setup_from_config(cfg);
  setup.threads = threads;
  const McResult res = run_mc(setup);

  const std::string runs_path = out_prefix + "_runs.csv";
  const std::string summary_path = out_prefix + "_summary.json";
  write_mc_csv(runs_path, res);
  write_json(summary_path, mc_summary_to_json(res));

  log << "mc: estimator=" << res.estimator << " model=" << res.model << " runs=" << res.runs
      << " failures=" << res.failures;
  if (std::isfinite(res.mean_sqrtk_err))
    log << " mean_sqrtk_err=" << res.mean_sqrtk_err << " var_sqrtk_err=" << res.var_sqrtk_err;
  log << "\nwrote " << runs_path << " and " << summary_path << "\n";
}

}  // namespace mmax::cli
