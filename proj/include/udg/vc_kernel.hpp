#pragma once

#include <optional>
#include <unordered_set>
#include <vector>

#include "udg/grid_index.hpp"

namespace udg {

// Vertex cover kernel V': the non-isolated vertices plus every vertex whose
// cell lies within Chebyshev distance 5 of a cell holding two or more
// vertices. Updates re-test the O(1) candidates whose membership can flip.
// Lockstep contract as for the other structures: apply_* after the grid.
class VCKernel {
 public:
  explicit VCKernel(const GridIndex& grid);

  void apply_insert(VertexId v, Point p, CellId c);
  void apply_delete(VertexId v, Point p, CellId c);

  bool contains(VertexId v) const { return members_.count(v) != 0; }
  const std::unordered_set<VertexId>& members() const { return members_; }
  std::size_t size() const { return members_.size(); }

  // Vertex cover of the whole unit disk graph, size <= k, if one exists.
  std::optional<std::vector<VertexId>> query_vc(int k) const;

  // Reference evaluation of the membership rule over all active vertices.
  static std::unordered_set<VertexId> compute_members(const GridIndex& grid);

  void check_invariants() const;

  // deliberately breaks the kernel; diff-harness sensitivity tests only
  void testing_erase_member(VertexId v) { members_.erase(v); }

 private:
  bool rule_holds(VertexId v, Point p) const;
  void reeval(VertexId v, Point p);

  const GridIndex* grid_;
  std::unordered_set<VertexId> members_;
};

}  // namespace udg
