#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <utility>
#include <vector>

#include "mdcnet/config.hpp"
#include "mdcnet/error.hpp"
#include "mdcnet/rng.hpp"

namespace mdcnet {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
  Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
  Vec2 operator*(double s) const { return {x * s, y * s}; }
  double norm() const { return std::hypot(x, y); }
  bool operator==(const Vec2&) const = default;
};

inline double wrap_coord(double c, double side) {
  c = std::fmod(c, side);
  if (c < 0) c += side;
  if (c >= side) c = 0.0;
  return c;
}

// Displacement b - a; minimum image under torus.
inline Vec2 displacement(Vec2 a, Vec2 b, double side, BoundaryMode mode) {
  Vec2 d = b - a;
  if (mode == BoundaryMode::torus) {
    d.x -= side * std::round(d.x / side);
    d.y -= side * std::round(d.y / side);
  }
  return d;
}

inline double distance(Vec2 a, Vec2 b, double side, BoundaryMode mode) {
  return displacement(a, b, side, mode).norm();
}

struct PointSet {
  std::vector<Vec2> points;
  double density = 0.0;
  double arena_side = 0.0;
  BoundaryMode boundary = BoundaryMode::torus;

  std::size_t size() const { return points.size(); }
  bool empty() const { return points.empty(); }
};

inline PointSet sample_ppp(double density, double arena_side, std::uint64_t seed,
                           BoundaryMode mode = BoundaryMode::torus) {
  if (!(density >= 0.0)) throw Error(ErrorKind::InvalidArgument, "PPP density must be >= 0");
  PointSet s{{}, density, arena_side, mode};
  Rng rng(seed);
  long n = rng.poisson(density * arena_side * arena_side);
  s.points.reserve(static_cast<std::size_t>(n));
  for (long i = 0; i < n; ++i) s.points.push_back({rng.uniform(0.0, arena_side), rng.uniform(0.0, arena_side)});
  return s;
}

struct NearestResult {
  std::size_t index;
  double distance;
};

// Exhaustive scan; ties go to the lowest index.
inline NearestResult nearest(Vec2 from, const PointSet& candidates) {
  if (candidates.empty()) throw Error(ErrorKind::EmptyPointSet, "nearest() on an empty point set");
  NearestResult best{0, std::numeric_limits<double>::infinity()};
  for (std::size_t i = 0; i < candidates.points.size(); ++i) {
    double d = distance(from, candidates.points[i], candidates.arena_side, candidates.boundary);
    if (d < best.distance) best = {i, d};
  }
  return best;
}

// Uniform bucket grid over the arena. Cells are at least `cell` wide.
class SpatialGrid {
 public:
  SpatialGrid(double side, BoundaryMode mode, double cell) : side_(side), mode_(mode) {
    n_ = std::max(1, static_cast<int>(std::floor(side / std::max(cell, 1e-9))));
    n_ = std::min(n_, 1024);
    cell_ = side / n_;
    heads_.assign(static_cast<std::size_t>(n_) * n_, {});
  }

  void clear() {
    for (auto& h : heads_) h.clear();
    pos_.clear();
  }

  void insert(std::size_t id, Vec2 p) {
    if (pos_.size() <= id) pos_.resize(id + 1, {std::numeric_limits<double>::quiet_NaN(), 0});
    pos_[id] = p;
    heads_[cell_index(cx(p.x), cy(p.y))].push_back(id);
  }

  void build(const std::vector<Vec2>& pts) {
    clear();
    for (std::size_t i = 0; i < pts.size(); ++i) insert(i, pts[i]);
  }

  // Calls f(id, distance) for every stored point within radius r of p.
  template <class F>
  void for_each_within(Vec2 p, double r, F&& f) const {
    int reach = static_cast<int>(std::ceil(r / cell_));
    int ix = cx(p.x), iy = cy(p.y);
    int span = 2 * reach + 1;
    bool wrap = mode_ == BoundaryMode::torus;
    if (wrap && span > n_) reach = (n_ - 1) / 2, span = n_;
    for (int dx = -reach; dx < -reach + span; ++dx) {
      int gx = ix + dx;
      if (wrap) gx = ((gx % n_) + n_) % n_;
      else if (gx < 0 || gx >= n_) continue;
      for (int dy = -reach; dy < -reach + span; ++dy) {
        int gy = iy + dy;
        if (wrap) gy = ((gy % n_) + n_) % n_;
        else if (gy < 0 || gy >= n_) continue;
        for (std::size_t id : heads_[cell_index(gx, gy)]) {
          double d = distance(p, pos_[id], side_, mode_);
          if (d <= r) f(id, d);
        }
      }
    }
  }

  // Nearest stored point; ties to the lowest id. Empty grid -> EmptyPointSet.
  NearestResult nearest(Vec2 p) const {
    if (pos_.empty()) throw Error(ErrorKind::EmptyPointSet, "nearest() on an empty grid");
    NearestResult best{std::numeric_limits<std::size_t>::max(), std::numeric_limits<double>::infinity()};
    int ix = cx(p.x), iy = cy(p.y);
    int max_ring = n_;
    for (int ring = 0; ring <= max_ring; ++ring) {
      visit_ring(ix, iy, ring, [&](std::size_t id) {
        double d = distance(p, pos_[id], side_, mode_);
        if (d < best.distance || (d == best.distance && id < best.index)) best = {id, d};
      });
      // every unvisited point is at least ring*cell_ away
      if (best.distance < static_cast<double>(ring) * cell_) break;
    }
    return best;
  }

 private:
  int cx(double x) const { return std::clamp(static_cast<int>(std::floor(x / cell_)), 0, n_ - 1); }
  int cy(double y) const { return cx(y); }
  std::size_t cell_index(int gx, int gy) const { return static_cast<std::size_t>(gy) * n_ + gx; }

  template <class F>
  void visit_ring(int ix, int iy, int ring, F&& f) const {
    bool wrap = mode_ == BoundaryMode::torus;
    std::vector<std::size_t> seen;
    auto cell = [&](int gx, int gy) {
      if (wrap) {
        gx = ((gx % n_) + n_) % n_;
        gy = ((gy % n_) + n_) % n_;
      } else if (gx < 0 || gy < 0 || gx >= n_ || gy >= n_) {
        return;
      }
      std::size_t c = cell_index(gx, gy);
      // small rings on a small torus can revisit a cell
      if (wrap && 2 * ring + 1 > n_) {
        if (std::find(seen.begin(), seen.end(), c) != seen.end()) return;
        seen.push_back(c);
      }
      for (std::size_t id : heads_[c]) f(id);
    };
    if (ring == 0) {
      cell(ix, iy);
      return;
    }
    for (int d = -ring; d <= ring; ++d) {
      cell(ix + d, iy - ring);
      cell(ix + d, iy + ring);
    }
    for (int d = -ring + 1; d <= ring - 1; ++d) {
      cell(ix - ring, iy + d);
      cell(ix + ring, iy + d);
    }
  }

  double side_;
  BoundaryMode mode_;
  int n_;
  double cell_;
  std::vector<std::vector<std::size_t>> heads_;
  std::vector<Vec2> pos_;
};

}  // namespace mdcnet
