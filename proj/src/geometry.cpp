#include "renergy/geometry.hpp"

#include <algorithm>
#include <random>
#include <string>

#include "renergy/errors.hpp"

namespace renergy {

Window make_window(double width, double height, bool wrap) {
  require(std::isfinite(width) && width > 0, "window width > 0");
  require(std::isfinite(height) && height > 0, "window height > 0");
  return Window{width, height, wrap};
}

PointSet sample_ppp(double intensity, const Window& window, Rng& rng) {
  require(std::isfinite(intensity) && intensity >= 0, "intensity >= 0");
  PointSet out;
  out.intensity = intensity;
  if (intensity == 0) return out;
  std::poisson_distribution<long> count(intensity * window.area());
  const long n = count(rng);
  out.points.resize(2, n);
  for (long i = 0; i < n; ++i) {
    out.points(0, i) = rng.uniform() * window.width;
    out.points(1, i) = rng.uniform() * window.height;
  }
  return out;
}

PointSet thin(const PointSet& set, double keep_probability, Rng& rng) {
  require(keep_probability >= 0 && keep_probability <= 1, "0 <= keep probability <= 1");
  std::vector<Index> kept;
  kept.reserve(static_cast<std::size_t>(set.size()));
  for (Index i = 0; i < set.size(); ++i) {
    if (rng.uniform() < keep_probability) kept.push_back(i);
  }
  PointSet out;
  out.intensity = set.intensity * keep_probability;
  out.points.resize(2, static_cast<Index>(kept.size()));
  for (std::size_t j = 0; j < kept.size(); ++j) out.points.col(static_cast<Index>(j)) = set.points.col(kept[j]);
  return out;
}

HexLattice hex_lattice(double density, const Window& window, const Point& offset) {
  require(std::isfinite(density) && density > 0, "lattice density > 0");
  const double a = hex_spacing(density);
  const double row = 0.5 * std::sqrt(3.0) * a;
  require(window.width >= a && window.height >= 2 * hex_circumradius(density),
          "window must contain one full lattice cell (side >= " + std::to_string(a) + " km)");

  const Point origin = window.center() + offset;
  const double eps = 1e-9 * a;
  const auto j_lo = static_cast<long>(std::floor(-origin.y() / row)) - 1;
  const auto j_hi = static_cast<long>(std::ceil((window.height - origin.y()) / row)) + 1;
  const auto i_lo = static_cast<long>(std::floor(-origin.x() / a)) - 2;
  const auto i_hi = static_cast<long>(std::ceil((window.width - origin.x()) / a)) + 2;

  std::vector<Point> sites;
  Index center = -1;
  double best = std::numeric_limits<double>::infinity();
  for (long j = j_lo; j <= j_hi; ++j) {
    double y = origin.y() + static_cast<double>(j) * row;
    if (y < 0 && y > -eps) y = 0;
    if (y < 0 || y >= window.height - eps) continue;
    const double shift = (((j % 2) + 2) % 2) ? 0.5 * a : 0.0;
    for (long i = i_lo; i <= i_hi; ++i) {
      double x = origin.x() + static_cast<double>(i) * a + shift;
      if (x < 0 && x > -eps) x = 0;
      if (x < 0 || x >= window.width - eps) continue;
      const Point p(x, y);
      const double d = (p - window.center()).squaredNorm();
      if (d < best) {
        best = d;
        center = static_cast<Index>(sites.size());
      }
      sites.push_back(p);
    }
  }

  HexLattice lat;
  lat.density = density;
  lat.spacing = a;
  lat.cell_area = 1.0 / density;
  lat.sites.points.resize(2, static_cast<Index>(sites.size()));
  for (std::size_t k = 0; k < sites.size(); ++k) lat.sites.points.col(static_cast<Index>(k)) = sites[k];
  lat.center_index = center;
  return lat;
}

Window commensurate_window(double spacing, double min_width, double min_height, bool wrap) {
  require(spacing > 0, "lattice spacing > 0");
  const double period_y = std::sqrt(3.0) * spacing;
  const double nx = std::max(1.0, std::ceil(min_width / spacing - 1e-9));
  const double ny = std::max(1.0, std::ceil(min_height / period_y - 1e-9));
  return make_window(nx * spacing, ny * period_y, wrap);
}

Nearest nearest(const Point& query, const PointSet& set, const Window& window) {
  if (set.empty()) throw EmptySetError("nearest: point set is empty");
  Index best_i = 0;
  double best = squared_distance(query, set.points.col(0), window);
  for (Index i = 1; i < set.size(); ++i) {
    const double d = squared_distance(query, set.points.col(i), window);
    if (d < best) {
      best = d;
      best_i = i;
    }
  }
  return {best_i, set.points.col(best_i), std::sqrt(best)};
}

GridIndex::GridIndex(const PointSet& set, const Window& window, double bucket_side)
    : set_(set), window_(window) {
  if (bucket_side <= 0) {
    const double rate = set.intensity > 0
                            ? set.intensity
                            : static_cast<double>(std::max<Index>(set.size(), 1)) / window.area();
    bucket_side = 1.0 / std::sqrt(rate);
  }
  nx_ = std::max<Index>(1, static_cast<Index>(std::floor(window.width / bucket_side)));
  ny_ = std::max<Index>(1, static_cast<Index>(std::floor(window.height / bucket_side)));
  // Cap the bucket count so sparse sets on huge windows stay cheap.
  while (nx_ * ny_ > 4 * std::max<Index>(set.size(), 16)) {
    nx_ = std::max<Index>(1, nx_ / 2);
    ny_ = std::max<Index>(1, ny_ / 2);
  }
  side_x_ = window.width / static_cast<double>(nx_);
  side_y_ = window.height / static_cast<double>(ny_);

  std::vector<Index> bucket(static_cast<std::size_t>(set.size()));
  start_.assign(static_cast<std::size_t>(nx_ * ny_ + 1), 0);
  for (Index i = 0; i < set.size(); ++i) {
    const Index b = bucket_y(set.points(1, i)) * nx_ + bucket_x(set.points(0, i));
    bucket[static_cast<std::size_t>(i)] = b;
    ++start_[static_cast<std::size_t>(b + 1)];
  }
  for (std::size_t b = 1; b < start_.size(); ++b) start_[b] += start_[b - 1];
  entries_.resize(static_cast<std::size_t>(set.size()));
  std::vector<Index> fill(start_.begin(), start_.end() - 1);
  // Ascending index order inside each bucket.
  for (Index i = 0; i < set.size(); ++i) {
    entries_[static_cast<std::size_t>(fill[static_cast<std::size_t>(bucket[static_cast<std::size_t>(i)])]++)] = i;
  }
}

Index GridIndex::bucket_x(double x) const {
  return std::clamp<Index>(static_cast<Index>(std::floor(x / side_x_)), 0, nx_ - 1);
}

Index GridIndex::bucket_y(double y) const {
  return std::clamp<Index>(static_cast<Index>(std::floor(y / side_y_)), 0, ny_ - 1);
}

Nearest GridIndex::nearest(const Point& query) const {
  if (set_.empty()) throw EmptySetError("nearest: point set is empty");
  const Index bx = bucket_x(query.x());
  const Index by = bucket_y(query.y());
  const double s_min = std::min(side_x_, side_y_);

  Index best_i = -1;
  double best = std::numeric_limits<double>::infinity();
  auto visit = [&](Index cx, Index cy) {
    const Index b = cy * nx_ + cx;
    for (Index e = start_[static_cast<std::size_t>(b)]; e < start_[static_cast<std::size_t>(b + 1)]; ++e) {
      const Index i = entries_[static_cast<std::size_t>(e)];
      const double d = squared_distance(query, set_.points.col(i), window_);
      if (d < best || (d == best && i < best_i)) {
        best = d;
        best_i = i;
      }
    }
  };

  const Index max_ring = std::max(nx_, ny_);
  for (Index k = 0; k <= max_ring; ++k) {
    if (window_.wrap && (2 * k + 1 > nx_ || 2 * k + 1 > ny_)) {
      // Rings would revisit buckets through the wrap; finish with a scan.
      return renergy::nearest(query, set_, window_);
    }
    for (Index dy = -k; dy <= k; ++dy) {
      for (Index dx = -k; dx <= k; ++dx) {
        if (std::max(std::abs(dx), std::abs(dy)) != k) continue;
        Index cx = bx + dx;
        Index cy = by + dy;
        if (window_.wrap) {
          cx = ((cx % nx_) + nx_) % nx_;
          cy = ((cy % ny_) + ny_) % ny_;
        } else if (cx < 0 || cy < 0 || cx >= nx_ || cy >= ny_) {
          continue;
        }
        visit(cx, cy);
      }
    }
    const double reach = static_cast<double>(k) * s_min;
    if (best_i >= 0 && best < reach * reach) break;
  }
  return {best_i, set_.points.col(best_i), std::sqrt(best)};
}

std::vector<Index> GridIndex::within(const Point& query, double radius) const {
  std::vector<Index> out;
  const double r2 = radius * radius;
  const Index kx = static_cast<Index>(std::ceil(radius / side_x_));
  const Index ky = static_cast<Index>(std::ceil(radius / side_y_));
  const bool all_x = window_.wrap ? 2 * kx + 1 >= nx_ : false;
  const bool all_y = window_.wrap ? 2 * ky + 1 >= ny_ : false;
  const Index bx = bucket_x(query.x());
  const Index by = bucket_y(query.y());
  const Index x0 = all_x ? 0 : bx - kx, x1 = all_x ? nx_ - 1 : bx + kx;
  const Index y0 = all_y ? 0 : by - ky, y1 = all_y ? ny_ - 1 : by + ky;
  for (Index y = y0; y <= y1; ++y) {
    Index cy = y;
    if (window_.wrap) cy = ((cy % ny_) + ny_) % ny_;
    else if (cy < 0 || cy >= ny_) continue;
    for (Index x = x0; x <= x1; ++x) {
      Index cx = x;
      if (window_.wrap) cx = ((cx % nx_) + nx_) % nx_;
      else if (cx < 0 || cx >= nx_) continue;
      const Index b = cy * nx_ + cx;
      for (Index e = start_[static_cast<std::size_t>(b)]; e < start_[static_cast<std::size_t>(b + 1)]; ++e) {
        const Index i = entries_[static_cast<std::size_t>(e)];
        if (squared_distance(query, set_.points.col(i), window_) <= r2) out.push_back(i);
      }
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

Point sample_in_hexagon(double circumradius, Rng& rng) {
  const double half_w = 0.5 * std::sqrt(3.0) * circumradius;
  for (;;) {
    const double x = (2 * rng.uniform() - 1) * half_w;
    const double y = (2 * rng.uniform() - 1) * circumradius;
    if (std::abs(y) <= circumradius - std::abs(x) / std::sqrt(3.0)) return {x, y};
  }
}

}  // namespace renergy
