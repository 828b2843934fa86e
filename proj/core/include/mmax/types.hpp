#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

namespace mmax {

struct Point {
  double x = 0.0;
  double y = 0.0;
};

inline double distance(const Point& a, const Point& b) {
  return std::hypot(a.x - b.x, a.y - b.y);
}

/// Ordered list of observation sites in a common 1D or 2D space.
///
/// Coordinates carry the same length units as 1/beta. Duplicate sites are
/// representable (the dependence integrals are well defined for them);
/// consumers that require distinct sites call require_distinct().
class SiteSet {
 public:
  static SiteSet line(std::vector<double> xs);
  static SiteSet plane(std::vector<Point> pts);

  int dimension() const { return dim_; }
  std::size_t size() const { return pts_.size(); }
  const Point& operator[](std::size_t i) const { return pts_[i]; }
  const std::vector<Point>& points() const { return pts_; }

  bool all_distinct() const;
  void require_distinct(const char* who) const;

  /// max x - min x; 1D sets only.
  double range() const;

  double min_pair_distance() const;

 private:
  SiteSet(int dim, std::vector<Point> pts);

  int dim_ = 1;
  std::vector<Point> pts_;
};

/// n independent replications observed at d sites, row-major.
class ObservationMatrix {
 public:
  ObservationMatrix(std::size_t n, SiteSet sites);

  std::size_t rows() const { return n_; }
  std::size_t cols() const { return d_; }
  const SiteSet& sites() const { return sites_; }

  double& at(std::size_t i, std::size_t j) { return v_[i * d_ + j]; }
  double at(std::size_t i, std::size_t j) const { return v_[i * d_ + j]; }

  std::span<const double> row(std::size_t i) const {
    return {v_.data() + i * d_, d_};
  }
  std::vector<double> column(std::size_t j) const;

  std::span<const double> data() const { return v_; }
  std::span<double> data() { return v_; }

 private:
  std::size_t n_ = 0;
  std::size_t d_ = 0;
  SiteSet sites_;
  std::vector<double> v_;
};

}  // namespace mmax
