#include "mmax/exactdist.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "mmax/error.hpp"
#include "mmax/quadrature.hpp"
#include "mmax/rng.hpp"
#include "mmax/special.hpp"

namespace mmax {

namespace {

constexpr double kPi = 3.1415926535897932384626433832795;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Relative threshold under which w1 and w2 take the explicit equal-weights
// branch of the Student formulas.
constexpr double kEqualRelTol = 1e-12;

bool nearly_equal(double w1, double w2) {
  return std::fabs(w1 - w2) <= kEqualRelTol * std::max(w1, w2);
}

// P{lo <= T <= hi} for a standardized Student t, evaluated from the
// better-conditioned tail.
double t_interval_prob(double dof, double lo, double hi) {
  if (!(lo < hi)) return 0.0;
  if (lo >= 0.0) return special::student_t_sf(dof, lo) - special::student_t_sf(dof, hi);
  if (hi <= 0.0) return special::student_t_cdf(dof, hi) - special::student_t_cdf(dof, lo);
  return 1.0 - special::student_t_sf(dof, hi) - special::student_t_cdf(dof, lo);
}

// Endpoints of {u : |u - c| <= r} with the cancellation-prone endpoint
// recovered from c^2 - r^2 (supplied in a numerically stable form).
struct Interval {
  double lo, hi;
};

Interval stable_interval(double c, double r, double c_sq_minus_r_sq) {
  if (c >= 0.0) {
    const double hi = c + r;
    const double lo = hi > 0.0 ? c_sq_minus_r_sq / hi : c - r;
    return {lo, hi};
  }
  const double lo = c - r;
  const double hi = lo < 0.0 ? c_sq_minus_r_sq / lo : c + r;
  return {lo, hi};
}

}  // namespace

PairDependence::PairDependence(const KernelModel& model, double t)
    : PairDependence(model, Point{t, 0.0}) {
  if (model.dimension() != 1)
    throw DomainError("PairDependence: scalar displacement requires a 1D kernel");
}

PairDependence::PairDependence(const KernelModel& model, const Point& t)
    : model_(model), t_(t) {
  dist_ = model.dimension() == 1 ? std::fabs(t.x) : std::hypot(t.x, t.y);
  if (model.dimension() == 1 && t.y != 0.0)
    throw DomainError("PairDependence: 1D displacement must have zero second component");

  switch (model_.family()) {
    case Family::Normal1D:
    case Family::Normal2D:
    case Family::GeneralNormal2D:
      hr_scale_ = model_.normal_pair_scale(t_);
      break;
    case Family::DoubleExp1D:
      exp_elo_ = std::exp(-model_.beta() * dist_);
      break;
    case Family::StudentT1D: {
      const double b = model_.beta();
      const double c = b * b * dist_ * dist_ / model_.nu();
      tb2_ = 1.0 + 0.5 * c + std::sqrt(c * (1.0 + 0.25 * c));
      tb1_ = 1.0 / tb2_;  // b1 * b2 = 1
      const double e = 0.5 * (model_.nu() + 1.0);
      t_ratio_lo_ = std::pow(tb2_, -e);
      t_ratio_hi_ = std::pow(tb2_, e);
      break;
    }
    case Family::StudentT2D: {
      const double b = model_.beta();
      const double c = b * b * dist_ * dist_ / (2.0 * (model_.alpha() - 1.0));
      tb2_ = 1.0 + 0.5 * c + std::sqrt(c * (1.0 + 0.25 * c));
      tb1_ = 1.0 / tb2_;
      t_ratio_lo_ = std::pow(tb2_, -model_.alpha());
      t_ratio_hi_ = std::pow(tb2_, model_.alpha());
      break;
    }
    case Family::Exp2D:
      e2_a_ = std::fabs(t_.x);
      e2_b_ = std::fabs(t_.y);
      break;
  }
}

double PairDependence::neg_log_cdf(double w1, double w2) const {
  if (!(w1 > 0.0) || !(w2 > 0.0))
    throw DomainError("neg_log_cdf: w1, w2 must be positive");
  if (dist_ == 0.0) return 1.0 / std::min(w1, w2);
  switch (model_.family()) {
    case Family::DoubleExp1D: return exp1d_neg_log(w1, w2);
    case Family::Normal1D:
    case Family::Normal2D:
    case Family::GeneralNormal2D: return hr_neg_log(w1, w2);
    case Family::StudentT1D: return t1d_neg_log(w1, w2);
    case Family::Exp2D: return exp2d_neg_log(w1, w2);
    case Family::StudentT2D: return t2d_neg_log(w1, w2);
  }
  return kNaN;  // unreachable
}

double PairDependence::exp1d_neg_log(double w1, double w2) const {
  if (w2 < exp_elo_ * w1) return 1.0 / w2;
  if (w2 >= w1 / exp_elo_) return 1.0 / w1;
  return 1.0 / w1 + 1.0 / w2 - std::sqrt(exp_elo_) / std::sqrt(w1 * w2);
}

double PairDependence::hr_neg_log(double w1, double w2) const {
  const double a = hr_scale_;
  const double lr = std::log(w2 / w1);
  return special::normal_cdf(0.5 * a + lr / a) / w1 +
         special::normal_cdf(0.5 * a - lr / a) / w2;
}

double PairDependence::t1d_neg_log(double w1, double w2) const {
  const double nu = model_.nu();
  const double beta = model_.beta();
  if (nearly_equal(w1, w2))
    return (1.0 / w1 + 1.0 / w2) * model_.marginal_cdf(0.5 * beta * dist_);
  const double x = std::pow(w1 / w2, 2.0 / (nu + 1.0));
  if (x >= tb2_) return 1.0 / w2;
  if (x <= tb1_) return 1.0 / w1;

  const double t = dist_;
  const double omx = 1.0 - x;
  const double disc =
      std::max(0.0, x * t * t / (omx * omx) - nu / (beta * beta));
  const double r = std::sqrt(disc);
  const double c1 = t / omx;
  const double c2 = t * x / omx;
  const Interval i1 = stable_interval(c1, r, t * t / omx + nu / (beta * beta));
  const Interval i2 = stable_interval(c2, r, -x * t * t / omx + nu / (beta * beta));
  const double p1 = t_interval_prob(nu, beta * i1.lo, beta * i1.hi);
  const double p2 = t_interval_prob(nu, beta * i2.lo, beta * i2.hi);
  if (x > 1.0) return p1 / w1 + (1.0 - p2) / w2;
  return (1.0 - p1) / w1 + p2 / w2;
}

double PairDependence::exp2d_neg_log(double w1, double w2) const {
  const double beta = model_.beta();
  const double a = e2_a_, b = e2_b_;
  const double ssum = a + b;
  const double sdiff = std::fabs(a - b);
  const double u = std::log(w1 / w2) / beta;
  if (u < -ssum) return 1.0 / w1;
  if (u >= ssum) return 1.0 / w2;
  double bracket;
  if (u < -sdiff)
    bracket = 1.0 + 0.25 * beta * ssum + 0.25 * std::log(w1 / w2);
  else if (u < sdiff)
    bracket = 1.0 + 0.5 * beta * std::min(a, b);
  else
    bracket = 1.0 + 0.25 * beta * ssum + 0.25 * std::log(w2 / w1);
  return 1.0 / w1 + 1.0 / w2 -
         std::exp(-0.5 * beta * ssum) / std::sqrt(w1 * w2) * bracket;
}

double PairDependence::t2d_disk_prob(double center_dist, double radius_sq,
                                     double center_sq_minus_radius_sq) const {
  if (!(radius_sq > 0.0)) return 0.0;
  const double beta = model_.beta();
  const double alpha = model_.alpha();
  const double c = 2.0 * (alpha - 1.0);
  const double radius = std::sqrt(radius_sq);

  auto radial_cdf = [&](double rho) {
    return rho <= 0.0 ? 0.0 : -std::expm1(-(alpha - 1.0) * std::log1p(beta * beta * rho * rho / c));
  };
  if (center_dist <= 1e-300) return radial_cdf(radius);

  const double d = center_dist;
  const double d2 = center_sq_minus_radius_sq;

  double full = 0.0;
  double rho_lo;
  if (d2 < 0.0) {
    // Origin inside the disk: circles of radius below R - d lie wholly inside.
    const double rmd = -d2 / (radius + d);
    full = radial_cdf(rmd);
    rho_lo = rmd;
  } else {
    rho_lo = d2 / (radius + d);  // = d - R, stable
  }

  // Radial cutoff where the remaining mass is below 1e-15.
  const double rho_tail =
      std::sqrt(c * std::expm1(std::log(1e15) / (alpha - 1.0))) / beta;
  const double rho_hi = std::min(d + radius, rho_tail);
  if (!(rho_hi > rho_lo)) return std::clamp(full, 0.0, 1.0);

  const double dens_coef = beta * beta / (2.0 * kPi);
  auto arc = [&](double rho) {
    const double arg = (rho * rho + d2) / (2.0 * rho * d);
    const double psi = std::acos(std::clamp(arg, -1.0, 1.0));
    const double f = dens_coef * std::exp(-alpha * std::log1p(beta * beta * rho * rho / c));
    return 2.0 * psi * rho * f;
  };

  // Knots: kernel length scale plus thin layers at the arc edges, where the
  // integrand has square-root behavior.
  std::vector<double> knots = geometric_knots(rho_lo, rho_hi, {{d}}, 1.0 / beta);
  const double span = rho_hi - rho_lo;
  knots.push_back(rho_lo + 1e-3 * span);
  knots.push_back(rho_hi - 1e-3 * span);

  const double part =
      integrate_or_throw(arc, rho_lo, rho_hi, {1e-12, 4000}, knots, "t2d disk probability");
  return std::clamp(full + part, 0.0, 1.0);
}

double PairDependence::t2d_neg_log(double w1, double w2) const {
  const double alpha = model_.alpha();
  const double beta = model_.beta();
  if (nearly_equal(w1, w2))
    return (1.0 / w1 + 1.0 / w2) * model_.marginal_cdf(0.5 * beta * dist_);
  const double x = std::pow(w1 / w2, 1.0 / alpha);
  if (x >= tb2_) return 1.0 / w2;
  if (x <= tb1_) return 1.0 / w1;

  const double t = dist_;
  const double c = 2.0 * (alpha - 1.0);
  const double omx = 1.0 - x;
  const double disc = std::max(0.0, x * t * t / (omx * omx) - c / (beta * beta));
  const double d1 = t / std::fabs(omx);
  const double d2 = t * x / std::fabs(omx);
  const double p1 = t2d_disk_prob(d1, disc, t * t / omx + c / (beta * beta));
  const double p2 = t2d_disk_prob(d2, disc, -x * t * t / omx + c / (beta * beta));
  if (x > 1.0) return p1 / w1 + (1.0 - p2) / w2;
  return (1.0 - p1) / w1 + p2 / w2;
}

double PairDependence::L(double x1, double x2) const {
  if (!(x1 >= 0.0) || !(x2 >= 0.0)) throw DomainError("L: arguments must be nonnegative");
  if (x1 == 0.0 && x2 == 0.0) throw DomainError("L: arguments must not both be zero");
  if (x1 == 0.0) return x2;
  if (x2 == 0.0) return x1;
  return neg_log_cdf(1.0 / x1, 1.0 / x2);
}

double PairDependence::R(double x1, double x2) const { return x1 + x2 - L(x1, x2); }

double PairDependence::chi(double s) const {
  if (model_.dimension() != 1)
    throw UnsupportedModelError("chi: defined for the 1D families only");
  if (!(s > 0.0)) throw DomainError("chi: s must be positive");
  if (dist_ == 0.0) return -std::min(1.0, s);

  switch (model_.family()) {
    case Family::DoubleExp1D:
      if (s <= exp_elo_) return -s;
      if (s > 1.0 / exp_elo_) return -1.0;
      return -std::sqrt(exp_elo_) * std::sqrt(s);
    case Family::Normal1D: {
      const double a = hr_scale_;
      const double ls = std::log(s);
      return -s * special::normal_cdf(-0.5 * a - ls / a) -
             special::normal_cdf(-0.5 * a + ls / a);
    }
    case Family::StudentT1D: {
      if (s <= t_ratio_lo_) return -s;
      if (s > t_ratio_hi_) return -1.0;
      const double nu = model_.nu();
      const double beta = model_.beta();
      if (std::fabs(s - 1.0) <= kEqualRelTol)
        return -2.0 * model_.marginal_sf(0.5 * beta * dist_);
      const double x = std::pow(s, -2.0 / (nu + 1.0));
      const double t = dist_;
      const double omx = 1.0 - x;
      const double disc =
          std::max(0.0, x * t * t / (omx * omx) - nu / (beta * beta));
      const double r = std::sqrt(disc);
      const Interval i1 =
          stable_interval(t / omx, r, t * t / omx + nu / (beta * beta));
      const Interval i2 =
          stable_interval(t * x / omx, r, -x * t * t / omx + nu / (beta * beta));
      const double p1 = t_interval_prob(nu, beta * i1.lo, beta * i1.hi);
      const double p2 = t_interval_prob(nu, beta * i2.lo, beta * i2.hi);
      if (s < 1.0) return s * p1 - s - p2;  // x > 1
      return -s * p1 - 1.0 + p2;
    }
    default:
      throw UnsupportedModelError("chi: defined for the 1D families only");
  }
}

SpectralSupport PairDependence::spectral_support() const {
  if (dist_ == 0.0)
    throw DegenerateSpectrumError("spectral_support: zero displacement");
  SpectralSupport s;
  switch (model_.family()) {
    case Family::DoubleExp1D:
      s.theta_lo = std::atan(exp_elo_);
      s.theta_hi = std::atan(1.0 / exp_elo_);
      s.has_atoms = true;
      s.atom_mass = 0.5 * std::sqrt(1.0 + exp_elo_ * exp_elo_);
      break;
    case Family::Normal1D:
    case Family::Normal2D:
    case Family::GeneralNormal2D:
      s.theta_lo = 0.0;
      s.theta_hi = 0.5 * kPi;
      break;
    case Family::StudentT1D:
    case Family::StudentT2D:
      s.theta_lo = std::atan(t_ratio_lo_);
      s.theta_hi = std::atan(t_ratio_hi_);
      s.has_atoms = true;
      s.atom_mass = kNaN;  // sizes have no closed form here
      break;
    case Family::Exp2D: {
      const double e = std::exp(-model_.beta() * (e2_a_ + e2_b_));
      s.theta_lo = std::atan(e);
      s.theta_hi = std::atan(1.0 / e);
      s.has_atoms = true;
      s.atom_mass = kNaN;
      break;
    }
  }
  return s;
}

double r_multi_ones(const KernelModel& model, const SiteSet& sites) {
  if (model.dimension() != 1 || sites.dimension() != 1)
    throw DomainError("r_multi_ones: 1D kernels and sites only");
  if (sites.size() < 2) throw DomainError("r_multi_ones: at least two sites required");
  return 2.0 * model.marginal_sf(0.5 * model.beta() * sites.range());
}

ExpSpectralDensity exp1d_spectral_density(const PairDependence& pd) {
  if (pd.model().family() != Family::DoubleExp1D)
    throw UnsupportedModelError("exp1d_spectral_density: dexp1d pairs only");
  const SpectralSupport sup = pd.spectral_support();
  ExpSpectralDensity s;
  const double elo = std::exp(-pd.model().beta() * pd.distance());
  s.coef_ = 0.25 * std::sqrt(elo);
  s.lo_ = sup.theta_lo;
  s.hi_ = sup.theta_hi;
  s.atom_ = sup.atom_mass;
  return s;
}

double ExpSpectralDensity::operator()(double theta) const {
  if (theta <= lo_ || theta >= hi_) return 0.0;
  return coef_ * std::pow(std::sin(theta) * std::cos(theta), -1.5);
}

NormalSpectralDensity normal1d_spectral_density(const PairDependence& pd) {
  if (pd.model().family() != Family::Normal1D)
    throw UnsupportedModelError("normal1d_spectral_density: normal1d pairs only");
  if (pd.distance() == 0.0)
    throw DegenerateSpectrumError("normal1d_spectral_density: zero displacement");
  NormalSpectralDensity s;
  s.a_ = pd.model().beta() * pd.distance();
  return s;
}

double NormalSpectralDensity::operator()(double theta) const {
  if (theta <= 0.0 || theta >= 0.5 * kPi) return 0.0;
  const double a = a_;
  const double st = std::sin(theta), ct = std::cos(theta);
  const double lt = std::log(st / ct);
  const double term1 =
      (0.5 - lt / (a * a)) / ct * special::normal_pdf(0.5 * a + lt / a);
  const double term2 =
      (0.5 + lt / (a * a)) / st * special::normal_pdf(0.5 * a - lt / a);
  return (term1 + term2) / (a * st * ct);
}

double numeric_spectral_density(const PairDependence& pd, double theta, double h) {
  if (pd.complete_dependence())
    throw DegenerateSpectrumError("numeric_spectral_density: zero displacement");
  if (!(theta > 0.0 && theta < 0.5 * kPi))
    throw DomainError("numeric_spectral_density: theta must lie in (0, pi/2)");
  const SpectralSupport sup = pd.spectral_support();
  if (sup.has_atoms) {
    const double guard = 1e-3;
    if (std::fabs(theta - sup.theta_lo) < guard || std::fabs(theta - sup.theta_hi) < guard)
      throw AtomLocationError("numeric_spectral_density: theta too close to an atom");
  }
  if (!(h > 0.0 && h < 1e-2))
    throw DomainError("numeric_spectral_density: step must lie in (0, 1e-2)");
  const double w1 = std::cos(theta);
  const double w2 = std::sin(theta);
  auto mixed = [&](double hh) {
    const double g_pp = pd.neg_log_cdf(w1 + hh, w2 + hh);
    const double g_pm = pd.neg_log_cdf(w1 + hh, w2 - hh);
    const double g_mp = pd.neg_log_cdf(w1 - hh, w2 + hh);
    const double g_mm = pd.neg_log_cdf(w1 - hh, w2 - hh);
    return -(g_pp - g_pm - g_mp + g_mm) / (4.0 * hh * hh);
  };
  const double s1 = mixed(h);
  const double s2 = mixed(0.5 * h);
  return (4.0 * s2 - s1) / 3.0;  // one Richardson step, O(h^4)
}

McEstimate huesler_reiss_mc_check(const PairDependence& pd, double w1, double w2,
                                  std::size_t m, std::uint64_t seed) {
  const Family f = pd.model().family();
  if (f != Family::Normal1D && f != Family::Normal2D && f != Family::GeneralNormal2D)
    throw UnsupportedModelError("huesler_reiss_mc_check: normal-type pairs only");
  if (!(w1 > 0.0) || !(w2 > 0.0))
    throw DomainError("huesler_reiss_mc_check: w1, w2 must be positive");
  if (m < 10000) throw DomainError("huesler_reiss_mc_check: m must be at least 10^4");

  const double a = pd.model().normal_pair_scale(pd.displacement());
  if (a == 0.0) return {std::max(1.0 / w1, 1.0 / w2), 0.0};

  CounterRng rng(seed, 0x68726d63u);
  double mean = 0.0, m2 = 0.0;
  for (std::size_t i = 1; i <= m; ++i) {
    const double n = rng.next_normal();
    const double v = std::max(1.0 / w1, std::exp(n * a - 0.5 * a * a) / w2);
    const double delta = v - mean;
    mean += delta / static_cast<double>(i);
    m2 += delta * (v - mean);
  }
  const double var = m2 / static_cast<double>(m - 1);
  return {mean, std::sqrt(var / static_cast<double>(m))};
}

}  // namespace mmax
