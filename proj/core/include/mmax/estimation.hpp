#pragma once

#include <array>
#include <limits>
#include <string>
#include <vector>

#include "mmax/exactdist.hpp"
#include "mmax/kernels.hpp"
#include "mmax/types.hpp"

namespace mmax {

/// Rank-based empirical tail dependence
///   R_hat(x) = (1/k) #{ rows exceeding, at every selected site j, the
///              (n - [k x_j] + 1)-th order statistic of column j }.
/// Ranks break ties by replication index (stable), matching the continuous
/// case almost surely. Requires 1 <= k < n and [k x_j] >= 1 per site.
double r_hat(const ObservationMatrix& obs, std::span<const std::size_t> site_indices,
             std::span<const double> x, std::size_t k);

struct PairEstimate {
  std::size_t j = 0, m = 0;  // 0-based site indices, j < m
  double dist = 0.0;
  double r_hat = 0.0;
  double beta_hat = std::numeric_limits<double>::quiet_NaN();
  bool independent = false;  // R_hat == 0; excluded from the average
  bool clamped = false;      // inversion hit beta_max
  // Variance candidates for sqrt(k) (beta_hat_pair - beta), evaluated at the
  // pair's own estimate: the delta-method value and 4x it (the displayed
  // normalization constant); the Monte-Carlo harness arbitrates.
  double var_delta = std::numeric_limits<double>::quiet_NaN();
  double var_paper = std::numeric_limits<double>::quiet_NaN();
  double gap = std::numeric_limits<double>::quiet_NaN();  // model R at the report estimate - r_hat
};

struct EstimateReport {
  std::string estimator;  // pairwise | range | exp2d | general-normal
  std::string model;
  std::size_t n = 0, d = 0, k = 0;
  double beta_hat = std::numeric_limits<double>::quiet_NaN();
  double beta1_hat = std::numeric_limits<double>::quiet_NaN();
  double beta2_hat = std::numeric_limits<double>::quiet_NaN();
  double rho_hat = std::numeric_limits<double>::quiet_NaN();
  double joint_r_hat = std::numeric_limits<double>::quiet_NaN();  // range estimator
  // Per-pair delta-method variance when the report reduces to a single pair.
  double variance_hat = std::numeric_limits<double>::quiet_NaN();
  std::size_t excluded_independent = 0;
  std::vector<PairEstimate> per_pair;
  double max_abs_gap = std::numeric_limits<double>::quiet_NaN();
};

/// Average over all site pairs of (2/|t_j - t_m|) F^{-1}(1 - R_hat_jm/2).
/// Model supplies the standardized marginal F (normal / double-exponential /
/// Student); its beta is ignored.
EstimateReport beta_hat_pairwise(const ObservationMatrix& obs, const KernelModel& model,
                                 std::size_t k);

/// Single-statistic 1D estimator from the joint d-site exceedance count:
/// 2 F^{-1}(1 - R_hat(1,...,1)/2) / site range.
EstimateReport beta_hat_range(const ObservationMatrix& obs, const KernelModel& model,
                              std::size_t k);

/// 2D exponential-kernel estimator: per pair solve
///   (1 + (beta/2) min(a,b)) exp(-(beta/2)(a+b)) = R_hat
/// for beta by bisection, a/b the coordinate displacements. beta_max <= 0
/// selects the default 10^3 / (minimum pairwise distance).
EstimateReport beta_hat_exp2d(const ObservationMatrix& obs, std::size_t k,
                              double beta_max = 0.0);

/// General-normal least-squares fit: Q_hat = (2 Phi^{-1}(1 - R_hat/2))^2 per
/// pair, regressed on the pair geometry rows (dx^2, dx dy, dy^2); the
/// coefficients are solved back to (beta1, beta2, rho).
EstimateReport general_normal_fit(const ObservationMatrix& obs, std::size_t k);

// --- Pure inversion layer (drives the estimators; exercised directly by the
// --- exact-recovery suites, which bypass sampling noise).

/// Pairwise inversion (2/dist) F^{-1}(1 - r/2); r in (0, 1].
double invert_pair_r(const KernelModel& model, double dist, double r);

/// The exp2d map R(1,1; beta) = (1 + (beta/2) min(a,b)) e^{-(beta/2)(a+b)}.
double exp2d_r_map(double beta, double a, double b);
double invert_exp2d_r(double a, double b, double r, double beta_max);

struct GeneralNormalParams {
  double beta1 = 0.0, beta2 = 0.0, rho = 0.0;
  std::array<double, 3> a{};  // least-squares coefficients
};

/// Solve the stacked system Gamma a ~ q and map a to (beta1, beta2, rho).
/// Throws DesignDeficiencyError on rank < 3 and InfeasibleEstimateError when
/// the coefficients contradict the model family.
GeneralNormalParams solve_general_normal(const std::vector<std::array<double, 3>>& gamma_rows,
                                         std::span<const double> q);

/// Model-implied R(1,1) for a displacement, with the beta -> 0 limit 1.
double model_pair_r(const KernelModel& model, const Point& dt);

// --- Asymptotic variance machinery.

/// Var B(1,1) of the limiting pair process, from the nu-set algebra:
/// L + L1^2 + L2^2 - 2 L1 - 2 L2 + 2 L1 L2 R at (1,1), partials by central
/// differences on L.
double asymptotic_variance_b11(const PairDependence& pd);

struct VarianceCandidates {
  double var_b11 = 0.0;
  double delta = 0.0;  // delta-method variance of sqrt(k)(beta_hat - beta)
  double paper = 0.0;  // displayed-constant variant (4x delta)
};

VarianceCandidates asymptotic_variance_pair(const PairDependence& pd);

// --- Model validity diagnostic.

struct DiagnosticRow {
  std::size_t j = 0, m = 0;
  double dist = 0.0;
  double r_hat = 0.0;
  double model_r = 0.0;
  double gap = 0.0;  // model_r - r_hat
};

/// Per-pair comparison of the fitted model's R(1,1) against the direct
/// rank-based estimate; `fitted` carries the estimated parameter(s).
std::vector<DiagnosticRow> model_diagnostic(const ObservationMatrix& obs,
                                            const KernelModel& fitted, std::size_t k);

}  // namespace mmax
