#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mmax/kernels.hpp"
#include "mmax/simulator.hpp"
#include "mmax/types.hpp"

namespace mmax {

/// Flat key-value config with [section] headers. Lines starting with '#' or
/// ';' are comments. Keys keep the line number they were read from so errors
/// can point at the offending line.
class Config {
 public:
  static Config parse_file(const std::string& path);
  static Config parse_string(const std::string& text, const std::string& origin = "<string>");

  bool has_section(const std::string& section) const;
  bool has(const std::string& section, const std::string& key) const;

  std::string get(const std::string& section, const std::string& key) const;
  std::string get_or(const std::string& section, const std::string& key,
                     const std::string& fallback) const;
  double get_double(const std::string& section, const std::string& key) const;
  double get_double_or(const std::string& section, const std::string& key,
                       double fallback) const;
  long long get_int(const std::string& section, const std::string& key) const;
  long long get_int_or(const std::string& section, const std::string& key,
                       long long fallback) const;
  std::vector<double> get_double_list(const std::string& section,
                                      const std::string& key) const;

  int line_of(const std::string& section, const std::string& key) const;

  /// Rejects keys in `section` outside `allowed` (typo guard).
  void restrict_keys(const std::string& section,
                     const std::vector<std::string>& allowed) const;

 private:
  struct Entry {
    std::string value;
    int line = -1;
  };
  std::string origin_;
  std::map<std::string, std::map<std::string, Entry>> sections_;
};

/// [model] section -> kernel. Keys: model, beta, nu, alpha, beta1, beta2, rho.
KernelModel parse_kernel(const Config& cfg);
KernelModel parse_kernel_args(const std::string& name, std::optional<double> beta,
                              std::optional<int> nu, std::optional<double> alpha,
                              std::optional<double> beta1, std::optional<double> beta2,
                              std::optional<double> rho);

/// [sites] section: either `coords = x1, x2, ...` (1D) / `coords = x1 y1, x2 y2, ...`
/// (2D), or `file = path` pointing at a sites CSV.
SiteSet parse_sites(const Config& cfg, int dimension);

/// [sim] section -> SimConfig (n is read separately).
SimConfig parse_sim_config(const Config& cfg);

// CSV schemas. Observations: header site_1,...,site_d, one row per
// replication, 17 significant digits. Sites: header index,x[,y], 1-based index.
void write_observations_csv(const std::string& path, const ObservationMatrix& obs);
void write_sites_csv(const std::string& path, const SiteSet& sites);
std::vector<std::vector<double>> read_numeric_csv(const std::string& path,
                                                  std::vector<std::string>* header);
ObservationMatrix read_observations_csv(const std::string& obs_path,
                                        const std::string& sites_path);
SiteSet read_sites_csv(const std::string& path);

/// printf %.17g formatting used for every CSV number.
std::string format_g17(double v);

}  // namespace mmax
