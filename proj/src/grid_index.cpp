#include "udg/grid_index.hpp"

#include <algorithm>

#include "udg/error.hpp"

namespace udg {

CellId GridIndex::insert_vertex(VertexId v, Point p) {
  if (points_.count(v))
    throw Error(ErrorCode::duplicate_insert,
                "insert: vertex " + std::to_string(v) + " already active");
  CellId c = cell_of(p);
  points_.emplace(v, p);
  cells_[c].push_back(v);
  return c;
}

CellId GridIndex::erase_vertex(VertexId v) {
  auto it = points_.find(v);
  if (it == points_.end())
    throw Error(ErrorCode::unknown_vertex,
                "erase: vertex " + std::to_string(v) + " not active");
  CellId c = cell_of(it->second);
  points_.erase(it);
  auto cit = cells_.find(c);
  auto& list = cit->second;
  list.erase(std::find(list.begin(), list.end(), v));
  if (list.empty()) cells_.erase(cit);
  return c;
}

Point GridIndex::point_of(VertexId v) const {
  auto it = points_.find(v);
  if (it == points_.end())
    throw Error(ErrorCode::unknown_vertex,
                "point_of: vertex " + std::to_string(v) + " not active");
  return it->second;
}

std::span<const VertexId> GridIndex::residents(CellId c) const {
  auto it = cells_.find(c);
  if (it == cells_.end()) return {};
  return {it->second.data(), it->second.size()};
}

std::pair<std::size_t, std::size_t> GridIndex::cell_stats(CellId c, int l) const {
  std::size_t own = cell_count(c);
  std::size_t cluster = 0;
  for (std::int64_t dx = -l; dx <= l; ++dx)
    for (std::int64_t dy = -l; dy <= l; ++dy)
      cluster += cell_count(CellId{c.ix + dx, c.iy + dy});
  return {own, cluster};
}

bool GridIndex::adjacent(VertexId u, VertexId v) const {
  if (u == v)
    throw Error(ErrorCode::self_adjacency, "adjacent: self test undefined");
  return points_adjacent(point_of(u), point_of(v));
}

std::vector<VertexId> GridIndex::neighbors_of(VertexId v) const {
  Point p = point_of(v);
  std::vector<VertexId> out = neighbors_of_point(p);
  out.erase(std::remove(out.begin(), out.end(), v), out.end());
  return out;
}

std::vector<VertexId> GridIndex::neighbors_of_point(Point p) const {
  CellId c = cell_of(p);
  std::vector<VertexId> out;
  for (std::int64_t dx = -2; dx <= 2; ++dx)
    for (std::int64_t dy = -2; dy <= 2; ++dy) {
      auto it = cells_.find(CellId{c.ix + dx, c.iy + dy});
      if (it == cells_.end()) continue;
      for (VertexId u : it->second)
        if (points_adjacent(points_.at(u), p)) out.push_back(u);
    }
  std::sort(out.begin(), out.end());
  return out;
}

SimpleGraph GridIndex::induced_udg(std::span<const VertexId> sub) const {
  std::vector<VertexId> verts(sub.begin(), sub.end());
  std::sort(verts.begin(), verts.end());
  verts.erase(std::unique(verts.begin(), verts.end()), verts.end());
  std::vector<std::pair<VertexId, VertexId>> es;
  for (VertexId u : verts) {
    Point p = point_of(u);
    CellId c = cell_of(p);
    for (std::int64_t dx = -2; dx <= 2; ++dx)
      for (std::int64_t dy = -2; dy <= 2; ++dy) {
        auto it = cells_.find(CellId{c.ix + dx, c.iy + dy});
        if (it == cells_.end()) continue;
        for (VertexId w : it->second)
          if (w > u && points_adjacent(points_.at(w), p) &&
              std::binary_search(verts.begin(), verts.end(), w))
            es.emplace_back(u, w);
      }
  }
  return SimpleGraph::build(std::move(verts), std::move(es));
}

}  // namespace udg
