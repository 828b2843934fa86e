#include "mmax/types.hpp"

#include <algorithm>
#include <limits>
#include <string>

#include "mmax/error.hpp"

namespace mmax {

SiteSet::SiteSet(int dim, std::vector<Point> pts) : dim_(dim), pts_(std::move(pts)) {
  if (pts_.empty()) throw DomainError("SiteSet: at least one site required");
}

SiteSet SiteSet::line(std::vector<double> xs) {
  std::vector<Point> pts;
  pts.reserve(xs.size());
  for (double x : xs) pts.push_back({x, 0.0});
  return SiteSet(1, std::move(pts));
}

SiteSet SiteSet::plane(std::vector<Point> pts) { return SiteSet(2, std::move(pts)); }

bool SiteSet::all_distinct() const {
  for (std::size_t i = 0; i < pts_.size(); ++i)
    for (std::size_t j = i + 1; j < pts_.size(); ++j)
      if (pts_[i].x == pts_[j].x && pts_[i].y == pts_[j].y) return false;
  return true;
}

void SiteSet::require_distinct(const char* who) const {
  if (!all_distinct())
    throw DomainError(std::string(who) + ": sites must be pairwise distinct");
}

double SiteSet::range() const {
  if (dim_ != 1) throw DomainError("SiteSet::range: defined for 1D site sets only");
  auto [lo, hi] = std::minmax_element(
      pts_.begin(), pts_.end(), [](const Point& a, const Point& b) { return a.x < b.x; });
  return hi->x - lo->x;
}

double SiteSet::min_pair_distance() const {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < pts_.size(); ++i)
    for (std::size_t j = i + 1; j < pts_.size(); ++j)
      best = std::min(best, distance(pts_[i], pts_[j]));
  return best;
}

ObservationMatrix::ObservationMatrix(std::size_t n, SiteSet sites)
    : n_(n), d_(sites.size()), sites_(std::move(sites)), v_(n * d_, 0.0) {}

std::vector<double> ObservationMatrix::column(std::size_t j) const {
  std::vector<double> out(n_);
  for (std::size_t i = 0; i < n_; ++i) out[i] = v_[i * d_ + j];
  return out;
}

}  // namespace mmax
