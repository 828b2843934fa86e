#include "mmax/kernels.hpp"

#include <cmath>

#include "mmax/error.hpp"
#include "mmax/special.hpp"

namespace mmax {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;
constexpr double kInvSqrt2Pi = 0.39894228040143267793994605993438;

void require_positive(double v, const char* name) {
  if (!(v > 0.0) || !std::isfinite(v))
    throw DomainError(std::string(name) + " must be a positive finite real");
}

}  // namespace

const char* family_name(Family f) {
  switch (f) {
    case Family::Normal1D: return "normal1d";
    case Family::DoubleExp1D: return "dexp1d";
    case Family::StudentT1D: return "t1d";
    case Family::Normal2D: return "normal2d";
    case Family::Exp2D: return "exp2d";
    case Family::StudentT2D: return "t2d";
    case Family::GeneralNormal2D: return "gnormal2d";
  }
  return "?";
}

int family_dimension(Family f) {
  switch (f) {
    case Family::Normal1D:
    case Family::DoubleExp1D:
    case Family::StudentT1D:
      return 1;
    default:
      return 2;
  }
}

KernelModel KernelModel::normal1d(double beta) {
  require_positive(beta, "beta");
  KernelModel m(Family::Normal1D);
  m.beta_ = beta;
  return m;
}

KernelModel KernelModel::double_exp1d(double beta) {
  require_positive(beta, "beta");
  KernelModel m(Family::DoubleExp1D);
  m.beta_ = beta;
  return m;
}

KernelModel KernelModel::student_t1d(double beta, int nu) {
  require_positive(beta, "beta");
  if (nu < 1) throw DomainError("nu must be a positive integer");
  KernelModel m(Family::StudentT1D);
  m.beta_ = beta;
  m.nu_ = nu;
  return m;
}

KernelModel KernelModel::normal2d(double beta) {
  require_positive(beta, "beta");
  KernelModel m(Family::Normal2D);
  m.beta_ = beta;
  return m;
}

KernelModel KernelModel::exp2d(double beta) {
  require_positive(beta, "beta");
  KernelModel m(Family::Exp2D);
  m.beta_ = beta;
  return m;
}

KernelModel KernelModel::student_t2d(double beta, double alpha) {
  require_positive(beta, "beta");
  if (!(alpha > 1.0) || !std::isfinite(alpha))
    throw DomainError("alpha must be a real > 1");
  KernelModel m(Family::StudentT2D);
  m.beta_ = beta;
  m.alpha_ = alpha;
  return m;
}

KernelModel KernelModel::general_normal2d(double beta1, double beta2, double rho) {
  require_positive(beta1, "beta1");
  require_positive(beta2, "beta2");
  if (!(rho > -1.0 && rho < 1.0)) throw DomainError("rho must lie in (-1, 1)");
  KernelModel m(Family::GeneralNormal2D);
  m.beta_ = beta1;
  m.beta2_ = beta2;
  m.rho_ = rho;
  return m;
}

std::string KernelModel::describe() const {
  std::string s = family_name(family_);
  switch (family_) {
    case Family::StudentT1D:
      return s + "(beta=" + std::to_string(beta_) + ", nu=" + std::to_string(nu_) + ")";
    case Family::StudentT2D:
      return s + "(beta=" + std::to_string(beta_) + ", alpha=" + std::to_string(alpha_) + ")";
    case Family::GeneralNormal2D:
      return s + "(beta1=" + std::to_string(beta_) + ", beta2=" + std::to_string(beta2_) +
             ", rho=" + std::to_string(rho_) + ")";
    default:
      return s + "(beta=" + std::to_string(beta_) + ")";
  }
}

double KernelModel::beta() const {
  if (family_ == Family::GeneralNormal2D)
    throw UnsupportedModelError("beta(): the general normal model has beta1/beta2/rho");
  return beta_;
}

int KernelModel::nu() const {
  if (family_ != Family::StudentT1D) throw UnsupportedModelError("nu(): t1d only");
  return nu_;
}

double KernelModel::alpha() const {
  if (family_ != Family::StudentT2D) throw UnsupportedModelError("alpha(): t2d only");
  return alpha_;
}

double KernelModel::beta1() const {
  if (family_ != Family::GeneralNormal2D)
    throw UnsupportedModelError("beta1(): gnormal2d only");
  return beta_;
}

double KernelModel::beta2() const {
  if (family_ != Family::GeneralNormal2D)
    throw UnsupportedModelError("beta2(): gnormal2d only");
  return beta2_;
}

double KernelModel::rho() const {
  if (family_ != Family::GeneralNormal2D)
    throw UnsupportedModelError("rho(): gnormal2d only");
  return rho_;
}

double KernelModel::density(double x) const {
  if (dimension() != 1)
    throw DomainError("density(double): 1D kernels take a scalar argument");
  const double b = beta_;
  switch (family_) {
    case Family::Normal1D:
      return b * kInvSqrt2Pi * std::exp(-0.5 * b * b * x * x);
    case Family::DoubleExp1D:
      return 0.5 * b * std::exp(-b * std::fabs(x));
    case Family::StudentT1D:
      return b * special::student_t_pdf(nu_, b * x);
    default:
      return 0.0;  // unreachable
  }
}

double KernelModel::density(const Point& u) const {
  if (dimension() == 1) return density(u.x);
  const double b = beta_;
  switch (family_) {
    case Family::Normal2D:
      return b * b / kTwoPi * std::exp(-0.5 * b * b * (u.x * u.x + u.y * u.y));
    case Family::Exp2D:
      return 0.25 * b * b * std::exp(-b * (std::fabs(u.x) + std::fabs(u.y)));
    case Family::StudentT2D: {
      const double r2 = u.x * u.x + u.y * u.y;
      return b * b / kTwoPi *
             std::exp(-alpha_ * std::log1p(b * b * r2 / (2.0 * (alpha_ - 1.0))));
    }
    case Family::GeneralNormal2D: {
      const double b1 = beta_, b2 = beta2_, r = rho_;
      const double q = b1 * b1 * u.x * u.x - 2.0 * r * b1 * b2 * u.x * u.y +
                       b2 * b2 * u.y * u.y;
      const double c = 1.0 - r * r;
      return b1 * b2 / (kTwoPi * std::sqrt(c)) * std::exp(-0.5 * q / c);
    }
    default:
      return 0.0;  // unreachable
  }
}

double KernelModel::max_density() const { return density(Point{0.0, 0.0}); }

double KernelModel::normal_pair_scale(const Point& t) const {
  switch (family_) {
    case Family::Normal1D:
      return beta_ * std::fabs(t.x);
    case Family::Normal2D:
      return beta_ * std::hypot(t.x, t.y);
    case Family::GeneralNormal2D: {
      const double b1 = beta_, b2 = beta2_, r = rho_;
      const double q = (b1 * b1 * t.x * t.x - 2.0 * r * b1 * b2 * t.x * t.y +
                        b2 * b2 * t.y * t.y) /
                       (1.0 - r * r);
      return std::sqrt(q);
    }
    default:
      throw UnsupportedModelError("normal_pair_scale: normal-type kernels only");
  }
}

namespace {

// Student dof of the standardized scalar marginal: nu for the 1D t kernel,
// 2(alpha-1) for the radial 2D t kernel (its marginal integrates to exactly
// that Student law; checked by quadrature in the test suite).
double marginal_dof(Family f, int nu, double alpha) {
  return f == Family::StudentT1D ? static_cast<double>(nu) : 2.0 * (alpha - 1.0);
}

}  // namespace

double KernelModel::marginal_cdf(double u) const {
  switch (family_) {
    case Family::Normal1D:
    case Family::Normal2D:
      return special::normal_cdf(u);
    case Family::DoubleExp1D:
      return u >= 0.0 ? 1.0 - 0.5 * std::exp(-u) : 0.5 * std::exp(u);
    case Family::StudentT1D:
    case Family::StudentT2D:
      return special::student_t_cdf(marginal_dof(family_, nu_, alpha_), u);
    default:
      throw UnsupportedModelError("marginal_cdf: no scalar marginal for gnormal2d");
  }
}

double KernelModel::marginal_sf(double u) const {
  switch (family_) {
    case Family::Normal1D:
    case Family::Normal2D:
      return special::normal_sf(u);
    case Family::DoubleExp1D:
      return u >= 0.0 ? 0.5 * std::exp(-u) : 1.0 - 0.5 * std::exp(u);
    case Family::StudentT1D:
    case Family::StudentT2D:
      return special::student_t_sf(marginal_dof(family_, nu_, alpha_), u);
    default:
      throw UnsupportedModelError("marginal_sf: no scalar marginal for gnormal2d");
  }
}

double KernelModel::marginal_pdf(double u) const {
  switch (family_) {
    case Family::Normal1D:
    case Family::Normal2D:
      return special::normal_pdf(u);
    case Family::DoubleExp1D:
      return 0.5 * std::exp(-std::fabs(u));
    case Family::StudentT1D:
    case Family::StudentT2D:
      return special::student_t_pdf(marginal_dof(family_, nu_, alpha_), u);
    default:
      throw UnsupportedModelError("marginal_pdf: no scalar marginal for gnormal2d");
  }
}

double KernelModel::marginal_quantile(double p) const {
  if (!(p > 0.0 && p < 1.0))
    throw DomainError("marginal_quantile: p must lie in (0,1)");
  switch (family_) {
    case Family::Normal1D:
    case Family::Normal2D:
      return special::normal_quantile(p);
    case Family::DoubleExp1D:
      return p < 0.5 ? std::log(2.0 * p) : -std::log(2.0 * (1.0 - p));
    case Family::StudentT1D:
    case Family::StudentT2D:
      return special::student_t_quantile(marginal_dof(family_, nu_, alpha_), p);
    default:
      throw UnsupportedModelError("marginal_quantile: no scalar marginal for gnormal2d");
  }
}

double KernelModel::marginal_sf_inv(double q) const {
  if (!(q > 0.0 && q < 1.0))
    throw DomainError("marginal_sf_inv: q must lie in (0,1)");
  switch (family_) {
    case Family::Normal1D:
    case Family::Normal2D:
      return special::normal_sf_inv(q);
    case Family::DoubleExp1D:
      return q <= 0.5 ? -std::log(2.0 * q) : std::log(2.0 * (1.0 - q));
    case Family::StudentT1D:
    case Family::StudentT2D:
      return special::student_t_sf_inv(marginal_dof(family_, nu_, alpha_), q);
    default:
      throw UnsupportedModelError("marginal_sf_inv: no scalar marginal for gnormal2d");
  }
}

KernelModel KernelModel::with_beta(double beta) const {
  switch (family_) {
    case Family::Normal1D: return normal1d(beta);
    case Family::DoubleExp1D: return double_exp1d(beta);
    case Family::StudentT1D: return student_t1d(beta, nu_);
    case Family::Normal2D: return normal2d(beta);
    case Family::Exp2D: return exp2d(beta);
    case Family::StudentT2D: return student_t2d(beta, alpha_);
    default:
      throw UnsupportedModelError("with_beta: the general normal model has no single beta");
  }
}

double KernelModel::tail_radius(double eps) const {
  if (!(eps > 0.0 && eps < 1.0)) throw DomainError("tail_radius: eps must lie in (0,1)");
  switch (family_) {
    case Family::Normal1D:
      return special::normal_sf_inv(0.5 * eps) / beta_;
    case Family::DoubleExp1D:
      // P{|X| > r} = exp(-beta r)
      return std::log(1.0 / eps) / beta_;
    case Family::StudentT1D:
      return special::student_t_sf_inv(nu_, 0.5 * eps) / beta_;
    case Family::Normal2D:
      // radial tail is exactly exp(-beta^2 r^2 / 2)
      return std::sqrt(2.0 * std::log(1.0 / eps)) / beta_;
    case Family::Exp2D:
      // coordinatewise: P{|X1| > r or |X2| > r} <= 2 exp(-beta r)
      return std::log(2.0 / eps) / beta_;
    case Family::StudentT2D: {
      // radial tail is exactly (1 + beta^2 r^2 / (2(alpha-1)))^{-(alpha-1)}
      const double c = 2.0 * (alpha_ - 1.0);
      return std::sqrt(c * std::expm1(-std::log(eps) / (alpha_ - 1.0))) / beta_;
    }
    case Family::GeneralNormal2D: {
      // |X| is stochastically below sigma_max * |standard normal pair|, where
      // sigma_max^2 is the largest eigenvalue of Sigma = (Sigma^{-1})^{-1}.
      const double b1 = beta_, b2 = beta2_, r = rho_;
      const double c = 1.0 - r * r;
      const double tr = (b1 * b1 + b2 * b2) / c;
      const double det = b1 * b1 * b2 * b2 / c;
      const double disc = std::sqrt(std::max(0.0, tr * tr - 4.0 * det));
      const double lam_min = 0.5 * (tr - disc);  // smallest eigenvalue of Sigma^{-1}
      return std::sqrt(2.0 * std::log(1.0 / eps) / lam_min);
    }
  }
  return 0.0;  // unreachable
}

}  // namespace mmax
