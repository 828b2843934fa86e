#include "mmax_cli/report_json.hpp"

#include <cmath>
#include <fstream>

#include "mmax/error.hpp"
#include "mmax/io.hpp"

namespace mmax::cli {

namespace {

// JSON has no NaN; absent-by-construction fields serialize as null.
nlohmann::json num_or_null(double v) {
  if (std::isfinite(v)) return v;
  return nullptr;
}

}  // namespace

nlohmann::json report_to_json(const EstimateReport& rep) {
  nlohmann::json pairs = nlohmann::json::array();
  for (const auto& p : rep.per_pair) {
    pairs.push_back({{"j", p.j + 1},
                     {"m", p.m + 1},
                     {"distance", p.dist},
                     {"r_hat", p.r_hat},
                     {"beta_hat_pair", num_or_null(p.beta_hat)},
                     {"independent", p.independent},
                     {"clamped", p.clamped},
                     {"var_delta", num_or_null(p.var_delta)},
                     {"var_paper", num_or_null(p.var_paper)},
                     {"gap", num_or_null(p.gap)}});
  }
  return {{"estimator", rep.estimator},
          {"model", rep.model},
          {"n", rep.n},
          {"d", rep.d},
          {"k", rep.k},
          {"beta_hat", num_or_null(rep.beta_hat)},
          {"beta1_hat", num_or_null(rep.beta1_hat)},
          {"beta2_hat", num_or_null(rep.beta2_hat)},
          {"rho_hat", num_or_null(rep.rho_hat)},
          {"joint_r_hat", num_or_null(rep.joint_r_hat)},
          {"variance_hat", num_or_null(rep.variance_hat)},
          {"excluded_independent", rep.excluded_independent},
          {"max_abs_gap", num_or_null(rep.max_abs_gap)},
          {"per_pair", pairs}};
}

nlohmann::json mc_summary_to_json(const McResult& r) {
  nlohmann::json pairs = nlohmann::json::array();
  for (const auto& p : r.pairs) {
    pairs.push_back({{"j", p.j + 1},
                     {"m", p.m + 1},
                     {"distance", p.dist},
                     {"mean_sqrtk_err", p.mean_sqrtk_err},
                     {"var_sqrtk_err", p.var_sqrtk_err},
                     {"ad_statistic", p.ad.a2},
                     {"ad_critical_1pct", p.ad.critical_1pct},
                     {"ad_pass_1pct", p.ad.pass_1pct},
                     {"var_delta", p.var_delta},
                     {"var_paper", p.var_paper},
                     {"matched_candidate", p.matched}});
  }
  return {{"estimator", r.estimator},
          {"model", r.model},
          {"n", r.n},
          {"k", r.k},
          {"runs", r.runs},
          {"d", r.d},
          {"seed", r.seed},
          {"true_beta", num_or_null(r.true_beta)},
          {"failures", r.failures},
          {"mean_sqrtk_err", num_or_null(r.mean_sqrtk_err)},
          {"var_sqrtk_err", num_or_null(r.var_sqrtk_err)},
          {"ad_statistic", num_or_null(r.ad.a2)},
          {"ad_critical_1pct", num_or_null(r.ad.critical_1pct)},
          {"ad_pass_1pct", r.ad.pass_1pct},
          {"per_pair", pairs}};
}

void write_json(const std::string& path, const nlohmann::json& j) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot open '" + path + "' for writing");
  out << j.dump(2) << "\n";
  if (!out) throw DataError("write failed for '" + path + "'");
}

void write_pairs_csv(const std::string& path, const EstimateReport& rep) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot open '" + path + "' for writing");
  out << "j,m,distance,R_hat,beta_hat_pair,gap\n";
  for (const auto& p : rep.per_pair) {
    out << (p.j + 1) << "," << (p.m + 1) << "," << format_g17(p.dist) << ","
        << format_g17(p.r_hat) << "," << format_g17(p.beta_hat) << ","
        << format_g17(p.gap) << "\n";
  }
  if (!out) throw DataError("write failed for '" + path + "'");
}

}  // namespace mmax::cli
