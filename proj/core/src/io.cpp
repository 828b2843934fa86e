#include "mmax/io.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "mmax/error.hpp"

namespace mmax {

namespace {

std::string trim(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

double parse_double(const std::string& s, int line, const std::string& what) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw ConfigError("cannot parse '" + s + "' as a number for " + what, line);
  }
}

}  // namespace

Config Config::parse_string(const std::string& text, const std::string& origin) {
  Config cfg;
  cfg.origin_ = origin;
  std::istringstream in(text);
  std::string line;
  std::string section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#' || t[0] == ';') continue;
    if (t.front() == '[') {
      if (t.back() != ']') throw ConfigError("unterminated section header", lineno);
      section = trim(t.substr(1, t.size() - 2));
      if (section.empty()) throw ConfigError("empty section name", lineno);
      cfg.sections_[section];
      continue;
    }
    const auto eq = t.find('=');
    if (eq == std::string::npos)
      throw ConfigError("expected 'key = value' or '[section]'", lineno);
    if (section.empty()) throw ConfigError("key outside any [section]", lineno);
    const std::string key = trim(t.substr(0, eq));
    const std::string value = trim(t.substr(eq + 1));
    if (key.empty()) throw ConfigError("empty key", lineno);
    auto& sec = cfg.sections_[section];
    if (sec.count(key)) throw ConfigError("duplicate key '" + key + "'", lineno);
    sec[key] = {value, lineno};
  }
  return cfg;
}

Config Config::parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_string(ss.str(), path);
}

bool Config::has_section(const std::string& section) const {
  return sections_.count(section) > 0;
}

bool Config::has(const std::string& section, const std::string& key) const {
  auto it = sections_.find(section);
  return it != sections_.end() && it->second.count(key) > 0;
}

std::string Config::get(const std::string& section, const std::string& key) const {
  auto it = sections_.find(section);
  if (it == sections_.end()) throw ConfigError("missing [" + section + "] section");
  auto jt = it->second.find(key);
  if (jt == it->second.end())
    throw ConfigError("missing key '" + key + "' in [" + section + "]");
  return jt->second.value;
}

std::string Config::get_or(const std::string& section, const std::string& key,
                           const std::string& fallback) const {
  return has(section, key) ? get(section, key) : fallback;
}

int Config::line_of(const std::string& section, const std::string& key) const {
  auto it = sections_.find(section);
  if (it == sections_.end()) return -1;
  auto jt = it->second.find(key);
  return jt == it->second.end() ? -1 : jt->second.line;
}

double Config::get_double(const std::string& section, const std::string& key) const {
  return parse_double(get(section, key), line_of(section, key), section + "." + key);
}

double Config::get_double_or(const std::string& section, const std::string& key,
                             double fallback) const {
  return has(section, key) ? get_double(section, key) : fallback;
}

long long Config::get_int(const std::string& section, const std::string& key) const {
  const std::string s = get(section, key);
  const int line = line_of(section, key);
  try {
    std::size_t pos = 0;
    const long long v = std::stoll(s, &pos);
    if (pos != s.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw ConfigError("cannot parse '" + s + "' as an integer for " + section + "." + key,
                      line);
  }
}

long long Config::get_int_or(const std::string& section, const std::string& key,
                             long long fallback) const {
  return has(section, key) ? get_int(section, key) : fallback;
}

std::vector<double> Config::get_double_list(const std::string& section,
                                            const std::string& key) const {
  const std::string s = get(section, key);
  const int line = line_of(section, key);
  std::vector<double> out;
  for (const std::string& tok : split(s, ',')) {
    const std::string t = trim(tok);
    if (t.empty()) throw ConfigError("empty entry in list " + section + "." + key, line);
    out.push_back(parse_double(t, line, section + "." + key));
  }
  return out;
}

void Config::restrict_keys(const std::string& section,
                           const std::vector<std::string>& allowed) const {
  auto it = sections_.find(section);
  if (it == sections_.end()) return;
  for (const auto& [key, entry] : it->second) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
      throw ConfigError("unknown key '" + key + "' in [" + section + "]", entry.line);
  }
}

KernelModel parse_kernel_args(const std::string& name, std::optional<double> beta,
                              std::optional<int> nu, std::optional<double> alpha,
                              std::optional<double> beta1, std::optional<double> beta2,
                              std::optional<double> rho) {
  auto need = [&](const std::optional<double>& v, const char* key) {
    if (!v) throw ConfigError(std::string("model '") + name + "' requires " + key);
    return *v;
  };
  if (name == "normal1d") return KernelModel::normal1d(need(beta, "beta"));
  if (name == "dexp1d") return KernelModel::double_exp1d(need(beta, "beta"));
  if (name == "t1d") {
    if (!nu) throw ConfigError("model 't1d' requires nu");
    return KernelModel::student_t1d(need(beta, "beta"), *nu);
  }
  if (name == "normal2d") return KernelModel::normal2d(need(beta, "beta"));
  if (name == "exp2d") return KernelModel::exp2d(need(beta, "beta"));
  if (name == "t2d") return KernelModel::student_t2d(need(beta, "beta"), need(alpha, "alpha"));
  if (name == "gnormal2d")
    return KernelModel::general_normal2d(need(beta1, "beta1"), need(beta2, "beta2"),
                                         need(rho, "rho"));
  throw ConfigError("unknown model '" + name +
                    "' (expected normal1d | dexp1d | t1d | normal2d | exp2d | t2d | gnormal2d)");
}

KernelModel parse_kernel(const Config& cfg) {
  cfg.restrict_keys("model", {"model", "beta", "nu", "alpha", "beta1", "beta2", "rho"});
  const std::string name = cfg.get("model", "model");
  auto opt_d = [&](const char* key) -> std::optional<double> {
    if (!cfg.has("model", key)) return std::nullopt;
    return cfg.get_double("model", key);
  };
  std::optional<int> nu;
  if (cfg.has("model", "nu")) nu = static_cast<int>(cfg.get_int("model", "nu"));
  try {
    return parse_kernel_args(name, opt_d("beta"), nu, opt_d("alpha"), opt_d("beta1"),
                             opt_d("beta2"), opt_d("rho"));
  } catch (const DomainError& e) {
    throw ConfigError(std::string("invalid [model]: ") + e.what(),
                      cfg.line_of("model", "model"));
  }
}

SiteSet parse_sites(const Config& cfg, int dimension) {
  cfg.restrict_keys("sites", {"coords", "file"});
  if (cfg.has("sites", "file")) return read_sites_csv(cfg.get("sites", "file"));
  const std::string coords = cfg.get("sites", "coords");
  const int line = cfg.line_of("sites", "coords");
  std::vector<Point> pts;
  for (const std::string& tok : split(coords, ',')) {
    const std::string t = trim(tok);
    if (t.empty()) throw ConfigError("empty site entry", line);
    std::istringstream ss(t);
    Point p;
    if (dimension == 1) {
      if (!(ss >> p.x)) throw ConfigError("cannot parse 1D site '" + t + "'", line);
    } else {
      if (!(ss >> p.x >> p.y))
        throw ConfigError("cannot parse 2D site '" + t + "' (expected 'x y')", line);
    }
    std::string rest;
    if (ss >> rest) throw ConfigError("trailing characters in site '" + t + "'", line);
    pts.push_back(p);
  }
  if (dimension == 1) {
    std::vector<double> xs;
    xs.reserve(pts.size());
    for (const Point& p : pts) xs.push_back(p.x);
    return SiteSet::line(std::move(xs));
  }
  return SiteSet::plane(std::move(pts));
}

SimConfig parse_sim_config(const Config& cfg) {
  cfg.restrict_keys("sim", {"n", "seed", "tail_mass_tol", "window_margin", "max_points",
                            "threads"});
  SimConfig sc;
  sc.seed = static_cast<std::uint64_t>(cfg.get_int_or("sim", "seed", 0));
  sc.tail_mass_tol = cfg.get_double_or("sim", "tail_mass_tol", sc.tail_mass_tol);
  sc.max_points = static_cast<std::uint64_t>(
      cfg.get_int_or("sim", "max_points", static_cast<long long>(sc.max_points)));
  const std::string margin = cfg.get_or("sim", "window_margin", "auto");
  if (margin != "auto")
    sc.window_margin = parse_double(margin, cfg.line_of("sim", "window_margin"),
                                    "sim.window_margin");
  try {
    sc.validate();
  } catch (const DomainError& e) {
    throw ConfigError(std::string("invalid [sim]: ") + e.what());
  }
  return sc;
}

std::string format_g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_observations_csv(const std::string& path, const ObservationMatrix& obs) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot open '" + path + "' for writing");
  for (std::size_t j = 0; j < obs.cols(); ++j)
    out << (j ? "," : "") << "site_" << (j + 1);
  out << "\n";
  for (std::size_t i = 0; i < obs.rows(); ++i) {
    for (std::size_t j = 0; j < obs.cols(); ++j)
      out << (j ? "," : "") << format_g17(obs.at(i, j));
    out << "\n";
  }
  if (!out) throw DataError("write failed for '" + path + "'");
}

void write_sites_csv(const std::string& path, const SiteSet& sites) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot open '" + path + "' for writing");
  out << (sites.dimension() == 1 ? "index,x" : "index,x,y") << "\n";
  for (std::size_t i = 0; i < sites.size(); ++i) {
    out << (i + 1) << "," << format_g17(sites[i].x);
    if (sites.dimension() == 2) out << "," << format_g17(sites[i].y);
    out << "\n";
  }
  if (!out) throw DataError("write failed for '" + path + "'");
}

std::vector<std::vector<double>> read_numeric_csv(const std::string& path,
                                                  std::vector<std::string>* header) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open '" + path + "'");
  std::string line;
  if (!std::getline(in, line)) throw DataError("'" + path + "' is empty");
  if (header) {
    header->clear();
    for (const std::string& h : split(trim(line), ',')) header->push_back(trim(h));
  }
  std::vector<std::vector<double>> rows;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty()) continue;
    std::vector<double> row;
    for (const std::string& tok : split(t, ',')) {
      try {
        row.push_back(std::stod(trim(tok)));
      } catch (const std::exception&) {
        throw DataError("'" + path + "' line " + std::to_string(lineno) +
                        ": cannot parse '" + trim(tok) + "' as a number");
      }
    }
    if (!rows.empty() && row.size() != rows.front().size())
      throw DataError("'" + path + "' line " + std::to_string(lineno) +
                      ": inconsistent column count");
    rows.push_back(std::move(row));
  }
  return rows;
}

SiteSet read_sites_csv(const std::string& path) {
  std::vector<std::string> header;
  const auto rows = read_numeric_csv(path, &header);
  if (header.size() != 2 && header.size() != 3)
    throw DataError("'" + path + "': sites CSV must have header index,x or index,x,y");
  if (header[0] != "index" || header[1] != "x" ||
      (header.size() == 3 && header[2] != "y"))
    throw DataError("'" + path + "': unexpected sites CSV header");
  if (rows.empty()) throw DataError("'" + path + "': no sites");
  if (header.size() == 2) {
    std::vector<double> xs;
    for (const auto& r : rows) xs.push_back(r[1]);
    return SiteSet::line(std::move(xs));
  }
  std::vector<Point> pts;
  for (const auto& r : rows) pts.push_back({r[1], r[2]});
  return SiteSet::plane(std::move(pts));
}

ObservationMatrix read_observations_csv(const std::string& obs_path,
                                        const std::string& sites_path) {
  const SiteSet sites = read_sites_csv(sites_path);
  std::vector<std::string> header;
  const auto rows = read_numeric_csv(obs_path, &header);
  if (header.size() != sites.size())
    throw DataError("observations have " + std::to_string(header.size()) +
                    " columns but the sites file lists " + std::to_string(sites.size()) +
                    " sites");
  if (rows.empty()) throw DataError("'" + obs_path + "': no data rows");
  ObservationMatrix obs(rows.size(), sites);
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < sites.size(); ++j) obs.at(i, j) = rows[i][j];
  return obs;
}

}  // namespace mmax
