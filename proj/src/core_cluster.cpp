#include "udg/core_cluster.hpp"

#include <algorithm>
#include <stdexcept>

#include "udg/kernel_solvers.hpp"

namespace udg {

namespace {

// Triangle membership of a (possibly virtual) vertex at `pu`, optionally
// ignoring one active vertex and optionally counting one virtual point as
// active. Callers only invoke this where nearby occupancy is bounded.
bool triangle_test(const GridIndex& g, Point pu, VertexId self,
                   VertexId exclude, const Point* virt) {
  std::vector<Point> nbrs;
  CellId c = cell_of(pu);
  for (std::int64_t dx = -2; dx <= 2; ++dx)
    for (std::int64_t dy = -2; dy <= 2; ++dy)
      for (VertexId w : g.residents(CellId{c.ix + dx, c.iy + dy})) {
        if (w == self || w == exclude) continue;
        Point pw = g.point_of(w);
        if (points_adjacent(pw, pu)) nbrs.push_back(pw);
      }
  if (virt && points_adjacent(*virt, pu)) nbrs.push_back(*virt);
  for (std::size_t i = 0; i < nbrs.size(); ++i)
    for (std::size_t j = i + 1; j < nbrs.size(); ++j)
      if (points_adjacent(nbrs[i], nbrs[j])) return true;
  return false;
}

bool heavy_near(const std::unordered_set<CellId>& heavy, CellId b, int l) {
  for (std::int64_t dx = -l; dx <= l; ++dx)
    for (std::int64_t dy = -l; dy <= l; ++dy)
      if (heavy.count(CellId{b.ix + dx, b.iy + dy})) return true;
  return false;
}

}  // namespace

CoreCluster::CoreCluster(const GridIndex& grid) : grid_(&grid) {
  for (const auto& [c, members] : grid.cells()) {
    if (members.size() < 3) continue;
    heavy_cells_.insert(c);
    for (CellId b : neighbor_cells(c, 10)) heavy_within10_[b]++;
  }
  core_cells_ = compute_core_cells(grid);
}

bool CoreCluster::in_triangle(VertexId u, TriMemo* memo) const {
  if (memo) {
    auto it = memo->find(u);
    if (it != memo->end()) return it->second;
  }
  bool r = triangle_test(*grid_, grid_->point_of(u), u, u, nullptr);
  if (memo) memo->emplace(u, r);
  return r;
}

bool CoreCluster::tri_clause(CellId c, TriMemo& memo) const {
  for (std::int64_t dx = -5; dx <= 5; ++dx)
    for (std::int64_t dy = -5; dy <= 5; ++dy)
      for (VertexId u : grid_->residents(CellId{c.ix + dx, c.iy + dy}))
        if (in_triangle(u, &memo)) return true;
  return false;
}

bool CoreCluster::is_core_cell(CellId c) const {
  if (heavy_clause(c)) return true;
  TriMemo memo;
  return tri_clause(c, memo);
}

CoreCluster::Delta CoreCluster::apply_insert(VertexId v, Point p, CellId c) {
  return apply(true, v, p, c);
}

CoreCluster::Delta CoreCluster::apply_delete(VertexId v, Point p, CellId c) {
  return apply(false, v, p, c);
}

CoreCluster::Delta CoreCluster::apply(bool insert, VertexId v, Point p,
                                      CellId c) {
  Delta delta;
  bool c_was_core = contains_cell(c);
  std::size_t cnt = grid_->cell_count(c);
  std::unordered_set<CellId> to_eval;

  if (insert && cnt == 3) {
    heavy_cells_.insert(c);
    for (CellId b : neighbor_cells(c, 10))
      if (++heavy_within10_[b] == 1) to_eval.insert(b);
  } else if (!insert && cnt == 2) {
    heavy_cells_.erase(c);
    for (CellId b : neighbor_cells(c, 10)) {
      auto it = heavy_within10_.find(b);
      if (--(it->second) == 0) {
        heavy_within10_.erase(it);
        to_eval.insert(b);
      }
    }
  }

  // Triangle-status flips are confined to vertices within one unit of the
  // update, and only matter where no heavy cell dominates the neighborhood.
  TriMemo memo;
  std::vector<CellId> flipped_cells;
  for (CellId b : neighbor_cells(c, 2)) {
    auto members = grid_->residents(b);
    if (members.empty() || members.size() > 2) continue;
    if (heavy_near(heavy_cells_, b, 2)) continue;
    for (VertexId u : members) {
      if (u == v) continue;
      bool now = in_triangle(u, &memo);
      Point pu = grid_->point_of(u);
      bool before = insert ? triangle_test(*grid_, pu, u, v, nullptr)
                           : triangle_test(*grid_, pu, u, u, &p);
      if (now != before) flipped_cells.push_back(b);
    }
  }
  if (!heavy_near(heavy_cells_, c, 2)) {
    bool v_tri = insert ? (grid_->cell_count(c) <= 2 && in_triangle(v, &memo))
                        : triangle_test(*grid_, p, v, v, nullptr);
    if (v_tri) flipped_cells.push_back(c);
  }
  for (CellId b : flipped_cells)
    for (CellId e : neighbor_cells(b, 5)) to_eval.insert(e);

  for (CellId b : to_eval) {
    bool now = heavy_clause(b) || tri_clause(b, memo);
    bool was = contains_cell(b);
    if (now && !was) {
      core_cells_.insert(b);
      delta.cells_added.push_back(b);
    } else if (!now && was) {
      core_cells_.erase(b);
      delta.cells_removed.push_back(b);
    }
  }
  std::sort(delta.cells_added.begin(), delta.cells_added.end());
  std::sort(delta.cells_removed.begin(), delta.cells_removed.end());
  if (insert && !delta.cells_removed.empty())
    throw std::logic_error("CoreCluster: insert removed a core cell");
  if (!insert && !delta.cells_added.empty())
    throw std::logic_error("CoreCluster: delete added a core cell");

  for (CellId b : delta.cells_added) {
    auto members = grid_->residents(b);
    delta.entered_core.insert(delta.entered_core.end(), members.begin(),
                              members.end());
  }
  for (CellId b : delta.cells_removed) {
    auto members = grid_->residents(b);
    delta.left_core.insert(delta.left_core.end(), members.begin(),
                           members.end());
  }
  if (insert && contains_cell(c) &&
      !std::binary_search(delta.cells_added.begin(), delta.cells_added.end(),
                          c))
    delta.entered_core.push_back(v);
  if (!insert && c_was_core) delta.left_core.push_back(v);
  std::sort(delta.entered_core.begin(), delta.entered_core.end());
  std::sort(delta.left_core.begin(), delta.left_core.end());

  last_delta_ = delta;
  return delta;
}

std::vector<VertexId> CoreCluster::core_vertices() const {
  std::vector<VertexId> out;
  for (CellId c : core_cells_) {
    auto members = grid_->residents(c);
    out.insert(out.end(), members.begin(), members.end());
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::optional<std::vector<VertexId>> CoreCluster::query_ths(int k) const {
  if (k < 0) return std::nullopt;
  auto core = core_vertices();
  // greedy vertex-disjoint triangle packing: each packed triangle needs its
  // own hitter, so more than k of them is a certain no
  std::unordered_set<VertexId> used;
  int packed = 0;
  for (VertexId u : core) {
    if (used.count(u)) continue;
    auto nbrs = grid_->neighbors_of(u);
    std::erase_if(nbrs, [&](VertexId w) {
      return used.count(w) != 0 || !in_core(w);
    });
    bool found = false;
    for (std::size_t i = 0; i < nbrs.size() && !found; ++i)
      for (std::size_t j = i + 1; j < nbrs.size() && !found; ++j)
        if (grid_->adjacent(nbrs[i], nbrs[j])) {
          used.insert(u);
          used.insert(nbrs[i]);
          used.insert(nbrs[j]);
          found = true;
        }
    if (found && ++packed > k) return std::nullopt;
  }
  auto g = grid_->induced_udg(core);
  return solvers::solve_ths(g, k);
}

std::unordered_set<CellId> CoreCluster::compute_core_cells(
    const GridIndex& grid) {
  std::unordered_set<CellId> out;
  for (const auto& [c, members] : grid.cells())
    if (members.size() >= 3)
      for (CellId b : neighbor_cells(c, 10)) out.insert(b);
  for (const auto& [c, members] : grid.cells()) {
    bool holds_tri = false;
    for (VertexId u : members)
      if (triangle_test(grid, grid.point_of(u), u, u, nullptr)) {
        holds_tri = true;
        break;
      }
    if (holds_tri)
      for (CellId b : neighbor_cells(c, 5)) out.insert(b);
  }
  return out;
}

void CoreCluster::check_invariants() const {
  for (const auto& [c, members] : grid_->cells())
    if ((members.size() >= 3) != (heavy_cells_.count(c) != 0))
      throw std::logic_error("CoreCluster: heavy set out of sync");
  auto ref = compute_core_cells(*grid_);
  if (ref != core_cells_)
    throw std::logic_error("CoreCluster: core cells differ from scratch rule");
}

}  // namespace udg
