#include "mmax/estimation.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>

#include "mmax/error.hpp"
#include "mmax/linalg.hpp"
#include "mmax/special.hpp"

namespace mmax {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Marks the rows whose column value is among the top m in the stable
// (value, row index) order.
std::vector<char> top_m_rows(const ObservationMatrix& obs, std::size_t col, std::size_t m) {
  const std::size_t n = obs.rows();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const double va = obs.at(a, col), vb = obs.at(b, col);
    if (va != vb) return va < vb;
    return a < b;
  });
  std::vector<char> mark(n, 0);
  for (std::size_t pos = n - m; pos < n; ++pos) mark[order[pos]] = 1;
  return mark;
}

void check_estimation_inputs(const ObservationMatrix& obs, std::size_t k, const char* who) {
  if (obs.rows() < 2) throw DataError(std::string(who) + ": need at least two replications");
  if (obs.cols() < 2) throw DataError(std::string(who) + ": need at least two sites");
  if (k < 1 || k >= obs.rows())
    throw DomainError(std::string(who) + ": k must satisfy 1 <= k < n");
  obs.sites().require_distinct(who);
}

struct PairScan {
  std::vector<PairEstimate> pairs;
  std::size_t excluded = 0;
};

// R_hat(1,1) for every site pair.
PairScan scan_pairs(const ObservationMatrix& obs, std::size_t k) {
  PairScan out;
  const std::size_t d = obs.cols();
  std::vector<std::vector<char>> top(d);
  for (std::size_t j = 0; j < d; ++j) top[j] = top_m_rows(obs, j, k);
  for (std::size_t j = 0; j < d; ++j) {
    for (std::size_t m = j + 1; m < d; ++m) {
      std::size_t count = 0;
      for (std::size_t i = 0; i < obs.rows(); ++i)
        if (top[j][i] && top[m][i]) ++count;
      PairEstimate pe;
      pe.j = j;
      pe.m = m;
      pe.dist = distance(obs.sites()[j], obs.sites()[m]);
      pe.r_hat = static_cast<double>(count) / static_cast<double>(k);
      if (count == 0) {
        pe.independent = true;
        ++out.excluded;
      }
      out.pairs.push_back(pe);
    }
  }
  return out;
}

void require_some_dependent(const PairScan& scan, const char* who) {
  if (scan.excluded == scan.pairs.size())
    throw EstimationFailureError(std::string(who) +
                                 ": every pair looks tail-independent (R_hat = 0)");
}

double average_pair_betas(const std::vector<PairEstimate>& pairs) {
  double sum = 0.0;
  std::size_t cnt = 0;
  for (const auto& p : pairs)
    if (!p.independent) {
      sum += p.beta_hat;
      ++cnt;
    }
  return sum / static_cast<double>(cnt);
}

void fill_variances(PairEstimate& pe, const KernelModel& model, const Point& dt) {
  if (!(pe.beta_hat > 0.0)) {
    pe.var_delta = pe.var_paper = 0.0;
    return;
  }
  const PairDependence pd(model.with_beta(pe.beta_hat), dt);
  const VarianceCandidates vc = asymptotic_variance_pair(pd);
  pe.var_delta = vc.delta;
  pe.var_paper = vc.paper;
}

Point pair_displacement(const SiteSet& s, std::size_t j, std::size_t m) {
  return {s[m].x - s[j].x, s[m].y - s[j].y};
}

void fill_gaps(EstimateReport& rep, const ObservationMatrix& obs,
               const std::function<double(const Point&)>& model_r) {
  double worst = 0.0;
  for (auto& p : rep.per_pair) {
    p.gap = model_r(pair_displacement(obs.sites(), p.j, p.m)) - p.r_hat;
    worst = std::max(worst, std::fabs(p.gap));
  }
  rep.max_abs_gap = worst;
}

void fill_single_pair_variance(EstimateReport& rep) {
  if (rep.per_pair.size() == 1 && !rep.per_pair[0].independent)
    rep.variance_hat = rep.per_pair[0].var_delta;
}

}  // namespace

double r_hat(const ObservationMatrix& obs, std::span<const std::size_t> site_indices,
             std::span<const double> x, std::size_t k) {
  const std::size_t n = obs.rows();
  if (k < 1 || k >= n) throw DomainError("r_hat: k must satisfy 1 <= k < n");
  if (site_indices.empty()) throw DomainError("r_hat: no sites selected");
  if (site_indices.size() != x.size())
    throw DataError("r_hat: x must have one entry per selected site");
  for (std::size_t a = 0; a < site_indices.size(); ++a) {
    if (site_indices[a] >= obs.cols()) throw DomainError("r_hat: site index out of range");
    for (std::size_t b = a + 1; b < site_indices.size(); ++b)
      if (site_indices[a] == site_indices[b])
        throw DomainError("r_hat: selected sites must be distinct");
  }

  std::vector<char> all(n, 1);
  for (std::size_t a = 0; a < site_indices.size(); ++a) {
    const double kx = static_cast<double>(k) * x[a];
    const auto m = static_cast<std::size_t>(std::floor(kx));
    if (m < 1) throw DomainError("r_hat: [k x_j] must be at least 1 for every site");
    if (m > n) throw DomainError("r_hat: [k x_j] exceeds the sample size");
    const auto mark = top_m_rows(obs, site_indices[a], m);
    for (std::size_t i = 0; i < n; ++i) all[i] &= mark[i];
  }
  std::size_t count = 0;
  for (char c : all) count += c;
  return static_cast<double>(count) / static_cast<double>(k);
}

double invert_pair_r(const KernelModel& model, double dist, double r) {
  if (!(dist > 0.0)) throw DomainError("invert_pair_r: distance must be positive");
  if (!(r > 0.0 && r <= 1.0)) throw DomainError("invert_pair_r: r must lie in (0, 1]");
  if (r == 1.0) return 0.0;  // F^{-1}(1/2) = 0: complete dependence
  return 2.0 / dist * model.marginal_sf_inv(0.5 * r);
}

double exp2d_r_map(double beta, double a, double b) {
  return (1.0 + 0.5 * beta * std::min(a, b)) * std::exp(-0.5 * beta * (a + b));
}

double invert_exp2d_r(double a, double b, double r, double beta_max) {
  if (!(a >= 0.0 && b >= 0.0 && a + b > 0.0))
    throw DomainError("invert_exp2d_r: need a, b >= 0 with a + b > 0");
  if (!(r > 0.0 && r <= 1.0)) throw DomainError("invert_exp2d_r: r must lie in (0, 1]");
  if (r == 1.0) return 0.0;
  if (!(beta_max > 0.0)) throw DomainError("invert_exp2d_r: beta_max must be positive");
  // The map is strictly decreasing from 1 at beta = 0.
  if (exp2d_r_map(beta_max, a, b) > r) return beta_max;  // caller flags the clamp
  double lo = 0.0, hi = beta_max;
  for (int it = 0; it < 200 && hi - lo > 1e-14 * std::max(1.0, hi); ++it) {
    const double mid = 0.5 * (lo + hi);
    if (exp2d_r_map(mid, a, b) > r)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

GeneralNormalParams solve_general_normal(const std::vector<std::array<double, 3>>& gamma_rows,
                                         std::span<const double> q) {
  if (gamma_rows.size() < 3)
    throw DesignDeficiencyError(
        "general normal fit: fewer than 3 usable site pairs (need d >= 3 sites)");
  const LeastSquares3 ls = solve_least_squares3(gamma_rows, q);
  if (ls.rank < 3)
    throw DesignDeficiencyError(
        "general normal fit: pair geometry matrix has rank " + std::to_string(ls.rank) +
        " < 3 (collinear site design cannot identify beta1, beta2, rho)");
  const auto& a = ls.a;
  if (!(a[0] > 0.0) || !(a[2] > 0.0) || !(a[1] * a[1] < 4.0 * a[0] * a[2]))
    throw InfeasibleEstimateError(
        "general normal fit: least-squares coefficients contradict the model family", a);
  GeneralNormalParams p;
  p.a = a;
  p.beta1 = std::sqrt(a[0] - a[1] * a[1] / (4.0 * a[2]));
  p.beta2 = std::sqrt(a[2] - a[1] * a[1] / (4.0 * a[0]));
  p.rho = -a[1] / (2.0 * std::sqrt(a[0] * a[2]));
  return p;
}

double model_pair_r(const KernelModel& model, const Point& dt) {
  const double d = model.dimension() == 1 ? std::fabs(dt.x) : std::hypot(dt.x, dt.y);
  if (d == 0.0) return 1.0;
  return PairDependence(model, dt).R(1.0, 1.0);
}

EstimateReport beta_hat_pairwise(const ObservationMatrix& obs, const KernelModel& model,
                                 std::size_t k) {
  switch (model.family()) {
    case Family::Normal1D:
    case Family::DoubleExp1D:
    case Family::StudentT1D:
    case Family::Normal2D:
    case Family::StudentT2D:
      break;
    default:
      throw UnsupportedModelError(
          "beta_hat_pairwise: use beta_hat_exp2d / general_normal_fit for this family");
  }
  check_estimation_inputs(obs, k, "beta_hat_pairwise");
  if (obs.sites().dimension() != model.dimension())
    throw DataError("beta_hat_pairwise: site dimension does not match the model");

  PairScan scan = scan_pairs(obs, k);
  require_some_dependent(scan, "beta_hat_pairwise");
  for (auto& p : scan.pairs) {
    if (p.independent) continue;
    p.beta_hat = invert_pair_r(model, p.dist, p.r_hat);
    fill_variances(p, model, pair_displacement(obs.sites(), p.j, p.m));
  }

  EstimateReport rep;
  rep.estimator = "pairwise";
  rep.model = model.describe();
  rep.n = obs.rows();
  rep.d = obs.cols();
  rep.k = k;
  rep.per_pair = std::move(scan.pairs);
  rep.excluded_independent = scan.excluded;
  rep.beta_hat = average_pair_betas(rep.per_pair);
  fill_gaps(rep, obs, [&](const Point& dt) {
    return rep.beta_hat > 0.0 ? model_pair_r(model.with_beta(rep.beta_hat), dt) : 1.0;
  });
  fill_single_pair_variance(rep);
  return rep;
}

EstimateReport beta_hat_range(const ObservationMatrix& obs, const KernelModel& model,
                              std::size_t k) {
  if (model.dimension() != 1 || obs.sites().dimension() != 1)
    throw UnsupportedModelError("beta_hat_range: 1D models and sites only");
  check_estimation_inputs(obs, k, "beta_hat_range");

  std::vector<std::size_t> idx(obs.cols());
  std::iota(idx.begin(), idx.end(), 0);
  const std::vector<double> ones(obs.cols(), 1.0);
  const double joint = r_hat(obs, idx, ones, k);
  if (joint == 0.0)
    throw EstimationFailureError(
        "beta_hat_range: joint exceedance count is zero (sites look tail-independent)");

  const double range = obs.sites().range();
  EstimateReport rep;
  rep.estimator = "range";
  rep.model = model.describe();
  rep.n = obs.rows();
  rep.d = obs.cols();
  rep.k = k;
  rep.joint_r_hat = joint;
  rep.beta_hat = joint == 1.0 ? 0.0 : 2.0 * model.marginal_sf_inv(0.5 * joint) / range;

  PairScan scan = scan_pairs(obs, k);
  rep.per_pair = std::move(scan.pairs);
  rep.excluded_independent = scan.excluded;
  fill_gaps(rep, obs, [&](const Point& dt) {
    return rep.beta_hat > 0.0 ? model_pair_r(model.with_beta(rep.beta_hat), dt) : 1.0;
  });
  if (rep.d == 2 && rep.beta_hat > 0.0) {
    // Coincides with the pairwise estimator; report its variance candidates.
    const PairDependence pd(model.with_beta(rep.beta_hat),
                            pair_displacement(obs.sites(), 0, 1));
    rep.variance_hat = asymptotic_variance_pair(pd).delta;
  }
  return rep;
}

EstimateReport beta_hat_exp2d(const ObservationMatrix& obs, std::size_t k, double beta_max) {
  if (obs.sites().dimension() != 2)
    throw UnsupportedModelError("beta_hat_exp2d: 2D sites required");
  check_estimation_inputs(obs, k, "beta_hat_exp2d");
  if (!(beta_max > 0.0)) beta_max = 1e3 / obs.sites().min_pair_distance();

  PairScan scan = scan_pairs(obs, k);
  require_some_dependent(scan, "beta_hat_exp2d");
  for (auto& p : scan.pairs) {
    if (p.independent) continue;
    const Point dt = pair_displacement(obs.sites(), p.j, p.m);
    const double a = std::fabs(dt.x), b = std::fabs(dt.y);
    p.beta_hat = invert_exp2d_r(a, b, p.r_hat, beta_max);
    p.clamped = p.beta_hat == beta_max && exp2d_r_map(beta_max, a, b) > p.r_hat;
    fill_variances(p, KernelModel::exp2d(1.0), dt);
  }

  EstimateReport rep;
  rep.estimator = "exp2d";
  rep.model = "exp2d";
  rep.n = obs.rows();
  rep.d = obs.cols();
  rep.k = k;
  rep.per_pair = std::move(scan.pairs);
  rep.excluded_independent = scan.excluded;
  rep.beta_hat = average_pair_betas(rep.per_pair);
  fill_gaps(rep, obs, [&](const Point& dt) {
    return rep.beta_hat > 0.0
               ? model_pair_r(KernelModel::exp2d(rep.beta_hat), dt)
               : 1.0;
  });
  fill_single_pair_variance(rep);
  return rep;
}

EstimateReport general_normal_fit(const ObservationMatrix& obs, std::size_t k) {
  if (obs.sites().dimension() != 2)
    throw UnsupportedModelError("general_normal_fit: 2D sites required");
  if (obs.cols() < 3)
    throw DesignDeficiencyError(
        "general_normal_fit: need at least 3 sites for a rank-3 pair geometry");
  check_estimation_inputs(obs, k, "general_normal_fit");

  PairScan scan = scan_pairs(obs, k);
  require_some_dependent(scan, "general_normal_fit");

  std::vector<std::array<double, 3>> rows;
  std::vector<double> q;
  for (auto& p : scan.pairs) {
    if (p.independent) continue;
    const Point dt = pair_displacement(obs.sites(), p.j, p.m);
    rows.push_back({dt.x * dt.x, dt.x * dt.y, dt.y * dt.y});
    q.push_back(p.r_hat >= 1.0
                    ? 0.0
                    : std::pow(2.0 * special::normal_sf_inv(0.5 * p.r_hat), 2));
  }
  const GeneralNormalParams fit = solve_general_normal(rows, q);

  EstimateReport rep;
  rep.estimator = "general-normal";
  rep.model = "gnormal2d";
  rep.n = obs.rows();
  rep.d = obs.cols();
  rep.k = k;
  rep.beta1_hat = fit.beta1;
  rep.beta2_hat = fit.beta2;
  rep.rho_hat = fit.rho;
  rep.per_pair = std::move(scan.pairs);
  rep.excluded_independent = scan.excluded;
  const KernelModel fitted =
      KernelModel::general_normal2d(fit.beta1, fit.beta2, fit.rho);
  fill_gaps(rep, obs, [&](const Point& dt) { return model_pair_r(fitted, dt); });
  return rep;
}

double asymptotic_variance_b11(const PairDependence& pd) {
  if (pd.complete_dependence())
    throw DomainError("asymptotic_variance_b11: degenerate at zero displacement");
  const double L = pd.L(1.0, 1.0);
  const double R = pd.R(1.0, 1.0);
  const double h = 1e-6;
  const double L1 = (pd.L(1.0 + h, 1.0) - pd.L(1.0 - h, 1.0)) / (2.0 * h);
  const double L2 = (pd.L(1.0, 1.0 + h) - pd.L(1.0, 1.0 - h)) / (2.0 * h);
  const double v = L + L1 * L1 + L2 * L2 - 2.0 * L1 - 2.0 * L2 + 2.0 * L1 * L2 * R;
  return std::max(0.0, v);
}

VarianceCandidates asymptotic_variance_pair(const PairDependence& pd) {
  VarianceCandidates out;
  out.var_b11 = asymptotic_variance_b11(pd);
  const KernelModel& m = pd.model();
  double deriv;  // |d beta / d R| at the model's beta
  if (m.family() == Family::Exp2D) {
    const double beta = m.beta();
    const double a = std::fabs(pd.displacement().x);
    const double b = std::fabs(pd.displacement().y);
    const double s = a + b, mn = std::min(a, b);
    const double gp = std::exp(-0.5 * beta * s) *
                      (0.5 * mn - 0.5 * s * (1.0 + 0.5 * beta * mn));
    deriv = 1.0 / std::fabs(gp);
  } else if (m.has_scalar_marginal()) {
    const double beta = m.beta();
    deriv = 1.0 / (pd.distance() * m.marginal_pdf(0.5 * beta * pd.distance()));
  } else {
    throw UnsupportedModelError(
        "asymptotic_variance_pair: no per-pair scalar estimator for gnormal2d");
  }
  out.delta = out.var_b11 * deriv * deriv;
  out.paper = 4.0 * out.delta;
  return out;
}

std::vector<DiagnosticRow> model_diagnostic(const ObservationMatrix& obs,
                                            const KernelModel& fitted, std::size_t k) {
  check_estimation_inputs(obs, k, "model_diagnostic");
  if (obs.sites().dimension() != fitted.dimension())
    throw DataError("model_diagnostic: site dimension does not match the model");
  PairScan scan = scan_pairs(obs, k);
  std::vector<DiagnosticRow> rows;
  rows.reserve(scan.pairs.size());
  for (const auto& p : scan.pairs) {
    DiagnosticRow r;
    r.j = p.j;
    r.m = p.m;
    r.dist = p.dist;
    r.r_hat = p.r_hat;
    r.model_r = model_pair_r(fitted, pair_displacement(obs.sites(), p.j, p.m));
    r.gap = r.model_r - r.r_hat;
    rows.push_back(r);
  }
  return rows;
}

}  // namespace mmax
