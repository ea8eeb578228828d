#pragma once

#include <Eigen/Core>

#include <cmath>
#include <cstddef>
#include <numbers>
#include <vector>

#include "renergy/rng.hpp"

namespace renergy {

using Point = Eigen::Vector2d;
// Column-major 2 x N coordinate block; column i is point i.
using Points = Eigen::Matrix2Xd;
using Index = Eigen::Index;

// Rectangular simulation window [0, width) x [0, height) in km. With wrap the
// window is a torus and distances use the nearest periodic image.
struct Window {
  double width = 0;
  double height = 0;
  bool wrap = true;

  double area() const { return width * height; }
  Point center() const { return {0.5 * width, 0.5 * height}; }
  bool contains(const Point& p) const {
    return p.x() >= 0 && p.x() < width && p.y() >= 0 && p.y() < height;
  }
};

Window make_window(double width, double height, bool wrap = true);

struct PointSet {
  Points points = Points(2, 0);
  double intensity = 0;  // 0 for deterministic sets

  Index size() const { return points.cols(); }
  bool empty() const { return points.cols() == 0; }
  Point operator[](Index i) const { return points.col(i); }
};

// Sites of a triangular lattice; each site's Voronoi cell is a hexagon of
// area 1/density.
struct HexLattice {
  double density = 0;
  double spacing = 0;    // nearest-neighbour distance
  double cell_area = 0;  // 1 / density
  PointSet sites;
  Index center_index = -1;  // site closest to the window centre ("typical" site)
};

// Nearest-neighbour distance of a hexagonal packing with the given density.
inline double hex_spacing(double density) { return std::sqrt(2.0 / (std::sqrt(3.0) * density)); }

// Circumradius of the hexagonal cell of area 1/density.
inline double hex_circumradius(double density) {
  return std::sqrt(2.0 / (3.0 * std::sqrt(3.0) * density));
}

template <typename Scalar>
inline Scalar wrapped_delta(Scalar delta, Scalar period) {
  using std::abs;
  const Scalar a = abs(delta);
  return a > period - a ? period - a : a;
}

// Euclidean distance; on a wrapped window the minimum over the periodic images
// (equivalently the minimum over the 9 neighbouring copies).
template <typename DerivedA, typename DerivedB>
typename DerivedA::Scalar distance(const Eigen::MatrixBase<DerivedA>& a,
                                   const Eigen::MatrixBase<DerivedB>& b, const Window& w) {
  using Scalar = typename DerivedA::Scalar;
  Scalar dx = a(0) - b(0);
  Scalar dy = a(1) - b(1);
  if (w.wrap) {
    dx = wrapped_delta<Scalar>(dx, Scalar(w.width));
    dy = wrapped_delta<Scalar>(dy, Scalar(w.height));
  }
  using std::sqrt;
  return sqrt(dx * dx + dy * dy);
}

template <typename DerivedA, typename DerivedB>
typename DerivedA::Scalar squared_distance(const Eigen::MatrixBase<DerivedA>& a,
                                           const Eigen::MatrixBase<DerivedB>& b,
                                           const Window& w) {
  using Scalar = typename DerivedA::Scalar;
  Scalar dx = a(0) - b(0);
  Scalar dy = a(1) - b(1);
  if (w.wrap) {
    dx = wrapped_delta<Scalar>(dx, Scalar(w.width));
    dy = wrapped_delta<Scalar>(dy, Scalar(w.height));
  }
  return dx * dx + dy * dy;
}

// Homogeneous Poisson point process on the window.
PointSet sample_ppp(double intensity, const Window& window, Rng& rng);

// Keeps each point independently with probability p.
PointSet thin(const PointSet& set, double keep_probability, Rng& rng);

// Hexagonal lattice of the given density with one site at window.center() + offset.
HexLattice hex_lattice(double density, const Window& window, const Point& offset = Point::Zero());

// Smallest window no smaller than (min_width, min_height) on which a lattice of
// the given spacing is exactly periodic.
Window commensurate_window(double spacing, double min_width, double min_height, bool wrap = true);

struct Nearest {
  Index index = -1;
  Point point = Point::Zero();
  double distance = 0;
};

// Linear scan; ties go to the lowest index.
Nearest nearest(const Point& query, const PointSet& set, const Window& window);

// Exact nearest-neighbour queries through uniform grid bucketing. Agrees with
// the linear scan, including tie-breaking.
class GridIndex {
public:
  GridIndex(const PointSet& set, const Window& window, double bucket_side = 0);

  Nearest nearest(const Point& query) const;
  // All points within radius (inclusive), in ascending index order.
  std::vector<Index> within(const Point& query, double radius) const;

  const PointSet& set() const { return set_; }
  const Window& window() const { return window_; }

private:
  Index bucket_x(double x) const;
  Index bucket_y(double y) const;

  PointSet set_;
  Window window_;
  Index nx_ = 1;
  Index ny_ = 1;
  double side_x_ = 0;
  double side_y_ = 0;
  std::vector<Index> start_;  // CSR layout: bucket b owns entries [start_[b], start_[b+1])
  std::vector<Index> entries_;
};

// Uniform point in a pointy-top hexagon of the given circumradius centred at 0.
Point sample_in_hexagon(double circumradius, Rng& rng);

}  // namespace renergy
