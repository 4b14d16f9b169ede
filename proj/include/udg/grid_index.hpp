#pragma once

#include <cstddef>
#include <span>
#include <unordered_map>
#include <vector>

#include "udg/geometry.hpp"
#include "udg/graphs.hpp"

namespace udg {

enum class UpdateOp { insert, erase };

// Geometric substrate for the implicit unit disk graph: per-cell resident
// lists for the nonempty grid cells plus a vertex -> point map.
//
// Single writer, exclusive access. All other dynamic structures hold a
// reference to one GridIndex and must be driven in lockstep with it.
class GridIndex {
 public:
  CellId insert_vertex(VertexId v, Point p);
  CellId erase_vertex(VertexId v);

  bool contains(VertexId v) const { return points_.count(v) != 0; }
  Point point_of(VertexId v) const;
  CellId cell_of_vertex(VertexId v) const { return cell_of(point_of(v)); }

  std::size_t size() const { return points_.size(); }
  std::size_t cell_count(CellId c) const {
    auto it = cells_.find(c);
    return it == cells_.end() ? 0 : it->second.size();
  }
  std::span<const VertexId> residents(CellId c) const;

  const std::unordered_map<CellId, std::vector<VertexId>>& cells() const {
    return cells_;
  }
  const std::unordered_map<VertexId, Point>& points() const { return points_; }

  // (count in c, count summed over the l-neighboring cells of c).
  std::pair<std::size_t, std::size_t> cell_stats(CellId c, int l) const;

  bool adjacent(VertexId u, VertexId v) const;
  std::vector<VertexId> neighbors_of(VertexId v) const;    // sorted
  std::vector<VertexId> neighbors_of_point(Point p) const; // sorted, any active within distance 1

  SimpleGraph induced_udg(std::span<const VertexId> sub) const;

 private:
  std::unordered_map<CellId, std::vector<VertexId>> cells_;
  std::unordered_map<VertexId, Point> points_;
};

}  // namespace udg
