#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <vector>

namespace udg {

using VertexId = std::uint32_t;

struct Point {
  double x = 0.0;
  double y = 0.0;
};

inline double dist2(Point a, Point b) {
  double dx = a.x - b.x, dy = a.y - b.y;
  return dx * dx + dy * dy;
}

// Closed threshold: points at distance exactly 1 are adjacent.
inline bool points_adjacent(Point a, Point b) { return dist2(a, b) <= 1.0; }

// Cells have side 1/sqrt(2), so any two points in the same cell are adjacent
// and adjacent points are at most 2 cells apart in Chebyshev distance.
struct CellId {
  std::int64_t ix = 0;
  std::int64_t iy = 0;

  friend bool operator==(CellId a, CellId b) {
    return a.ix == b.ix && a.iy == b.iy;
  }
  friend bool operator!=(CellId a, CellId b) { return !(a == b); }
  friend bool operator<(CellId a, CellId b) {
    if (a.ix != b.ix) return a.ix < b.ix;
    return a.iy < b.iy;
  }
};

inline CellId cell_of(Point p) {
  constexpr double kSqrt2 = 1.4142135623730951;
  return CellId{static_cast<std::int64_t>(std::floor(p.x * kSqrt2)),
                static_cast<std::int64_t>(std::floor(p.y * kSqrt2))};
}

inline std::int64_t cell_distance(CellId a, CellId b) {
  std::int64_t dx = a.ix >= b.ix ? a.ix - b.ix : b.ix - a.ix;
  std::int64_t dy = a.iy >= b.iy ? a.iy - b.iy : b.iy - a.iy;
  return dx >= dy ? dx : dy;
}

// The (2l+1)^2 cells at Chebyshev distance <= l, including c itself.
inline std::vector<CellId> neighbor_cells(CellId c, int l) {
  std::vector<CellId> out;
  out.reserve(static_cast<std::size_t>(2 * l + 1) * (2 * l + 1));
  for (std::int64_t dx = -l; dx <= l; ++dx)
    for (std::int64_t dy = -l; dy <= l; ++dy)
      out.push_back(CellId{c.ix + dx, c.iy + dy});
  return out;
}

}  // namespace udg

template <>
struct std::hash<udg::CellId> {
  std::size_t operator()(const udg::CellId& c) const noexcept {
    std::uint64_t h = static_cast<std::uint64_t>(c.ix) * 0x9E3779B97F4A7C15ull;
    h ^= static_cast<std::uint64_t>(c.iy) + 0x9E3779B97F4A7C15ull + (h << 6) +
         (h >> 2);
    return static_cast<std::size_t>(h);
  }
};
