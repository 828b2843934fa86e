#pragma once

#include <string>

#include "json.hpp"
#include "mmax/estimation.hpp"
#include "mmax_cli/mc.hpp"

namespace mmax::cli {

nlohmann::json report_to_json(const EstimateReport& rep);
nlohmann::json mc_summary_to_json(const McResult& r);

void write_json(const std::string& path, const nlohmann::json& j);

/// Per-pair CSV with columns j,m,distance,R_hat,beta_hat_pair,gap.
void write_pairs_csv(const std::string& path, const EstimateReport& rep);

}  // namespace mmax::cli
