#include "udg/vc_kernel.hpp"

#include <algorithm>
#include <stdexcept>

#include "udg/kernel_solvers.hpp"

namespace udg {

VCKernel::VCKernel(const GridIndex& grid) : grid_(&grid) {
  members_ = compute_members(grid);
}

bool VCKernel::rule_holds(VertexId v, Point p) const {
  CellId c = cell_of(p);
  for (std::int64_t dx = -5; dx <= 5; ++dx)
    for (std::int64_t dy = -5; dy <= 5; ++dy)
      if (grid_->cell_count(CellId{c.ix + dx, c.iy + dy}) >= 2) return true;
  for (std::int64_t dx = -2; dx <= 2; ++dx)
    for (std::int64_t dy = -2; dy <= 2; ++dy)
      for (VertexId u : grid_->residents(CellId{c.ix + dx, c.iy + dy}))
        if (u != v && points_adjacent(grid_->point_of(u), p)) return true;
  return false;
}

void VCKernel::reeval(VertexId v, Point p) {
  if (rule_holds(v, p))
    members_.insert(v);
  else
    members_.erase(v);
}

void VCKernel::apply_insert(VertexId v, Point p, CellId c) {
  reeval(v, p);
  // c crossing occupancy 2 qualifies everything within 5; residents of cells
  // already holding >= 2 were members before, so only sparse cells contribute.
  if (grid_->cell_count(c) == 2) {
    for (CellId b : neighbor_cells(c, 5)) {
      std::size_t cnt = grid_->cell_count(b);
      if (cnt == 0 || cnt > 2) continue;
      for (VertexId u : grid_->residents(b)) members_.insert(u);
    }
  }
  // neighbors of v lose isolation; those in >= 2 cells are members already
  for (CellId b : neighbor_cells(c, 2)) {
    if (grid_->cell_count(b) != 1) continue;
    VertexId u = grid_->residents(b)[0];
    if (u != v && points_adjacent(grid_->point_of(u), p)) members_.insert(u);
  }
}

void VCKernel::apply_delete(VertexId v, Point p, CellId c) {
  members_.erase(v);
  if (grid_->cell_count(c) == 1) {
    // c dropped below two residents: sparse cells within 5 may disqualify
    for (CellId b : neighbor_cells(c, 5)) {
      if (grid_->cell_count(b) != 1) continue;
      VertexId u = grid_->residents(b)[0];
      reeval(u, grid_->point_of(u));
    }
  }
  // former neighbors of v may become isolated
  for (CellId b : neighbor_cells(c, 2)) {
    if (grid_->cell_count(b) != 1) continue;
    VertexId u = grid_->residents(b)[0];
    if (points_adjacent(grid_->point_of(u), p)) reeval(u, grid_->point_of(u));
  }
}

std::optional<std::vector<VertexId>> VCKernel::query_vc(int k) const {
  if (k < 0) return std::nullopt;
  // greedy maximal matching with an early exit: each matched edge needs its
  // own cover vertex, so more than k edges is a certain no
  std::vector<VertexId> sorted(members_.begin(), members_.end());
  std::sort(sorted.begin(), sorted.end());
  std::unordered_set<VertexId> matched;
  int matching = 0;
  for (VertexId u : sorted) {
    if (matched.count(u)) continue;
    for (VertexId w : grid_->neighbors_of(u)) {
      if (matched.count(w)) continue;
      matched.insert(u);
      matched.insert(w);  // neighbors_of is sorted: first hit is the min id
      ++matching;
      break;
    }
    if (matching > k) return std::nullopt;
  }
  auto g = grid_->induced_udg(sorted);
  auto cover = solvers::solve_vc(g, k);
  if (!cover) return std::nullopt;
  return cover;  // already sorted by id
}

std::unordered_set<VertexId> VCKernel::compute_members(const GridIndex& grid) {
  std::unordered_set<VertexId> out;
  for (const auto& [v, p] : grid.points()) {
    CellId c = cell_of(p);
    bool in = false;
    for (std::int64_t dx = -5; dx <= 5 && !in; ++dx)
      for (std::int64_t dy = -5; dy <= 5 && !in; ++dy)
        if (grid.cell_count(CellId{c.ix + dx, c.iy + dy}) >= 2) in = true;
    if (!in) in = !grid.neighbors_of(v).empty();
    if (in) out.insert(v);
  }
  return out;
}

void VCKernel::check_invariants() const {
  auto ref = compute_members(*grid_);
  if (ref != members_)
    throw std::logic_error("VCKernel: members differ from the rule evaluation");
  for (const auto& [v, p] : grid_->points())
    for (VertexId u : grid_->neighbors_of(v))
      if (!members_.count(u) || !members_.count(v))
        throw std::logic_error("VCKernel: edge endpoint outside V'");
}

}  // namespace udg
