#pragma once

#include <optional>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "udg/grid_index.hpp"

namespace udg {

// Core grid cluster: the cells within Chebyshev 10 of a cell holding three
// or more vertices, plus the cells within 5 of a cell holding a triangle
// vertex. V_core (the residents of those cells) is the triangle hitting
// kernel and the anchor set for the skeleton maintained by ShellState.
//
// The heavy clause is kept incrementally via per-cell counters of nearby
// heavy cells; the triangle clause is only ever evaluated where the heavy
// clause fails, which bounds all scans by constant occupancy.
class CoreCluster {
 public:
  explicit CoreCluster(const GridIndex& grid);

  struct Delta {
    std::vector<CellId> cells_added;
    std::vector<CellId> cells_removed;
    std::vector<VertexId> entered_core;  // includes the inserted vertex when core
    std::vector<VertexId> left_core;     // includes the deleted vertex when it was core
    bool empty() const {
      return cells_added.empty() && cells_removed.empty() &&
             entered_core.empty() && left_core.empty();
    }
  };

  Delta apply_insert(VertexId v, Point p, CellId c);
  Delta apply_delete(VertexId v, Point p, CellId c);

  bool is_core_cell(CellId c) const;  // fresh rule evaluation
  bool contains_cell(CellId c) const { return core_cells_.count(c) != 0; }
  bool in_core(VertexId v) const {
    return contains_cell(grid_->cell_of_vertex(v));
  }
  const std::unordered_set<CellId>& core_cells() const { return core_cells_; }
  std::vector<VertexId> core_vertices() const;  // sorted
  const Delta& last_delta() const { return last_delta_; }

  // Triangle hitting set of the whole unit disk graph, size <= k, if any.
  std::optional<std::vector<VertexId>> query_ths(int k) const;

  static std::unordered_set<CellId> compute_core_cells(const GridIndex& grid);
  void check_invariants() const;

 private:
  using TriMemo = std::unordered_map<VertexId, bool>;

  bool heavy_clause(CellId c) const {
    auto it = heavy_within10_.find(c);
    return it != heavy_within10_.end() && it->second > 0;
  }
  bool tri_clause(CellId c, TriMemo& memo) const;
  bool in_triangle(VertexId u, TriMemo* memo) const;
  Delta apply(bool insert, VertexId v, Point p, CellId c);

  const GridIndex* grid_;
  std::unordered_set<CellId> heavy_cells_;          // occupancy >= 3
  std::unordered_map<CellId, int> heavy_within10_;  // nearby heavy cell count
  std::unordered_set<CellId> core_cells_;
  Delta last_delta_;
};

}  // namespace udg
