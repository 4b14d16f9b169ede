#pragma once

#include <cstdint>
#include <list>
#include <map>
#include <optional>
#include <unordered_map>
#include <vector>

#include "udg/grid_index.hpp"
#include "udg/kernel_solvers.hpp"

namespace udg {

// Fully dynamic k-path / k-cycle structure (k fixed at construction).
// Per nonempty cell: the vertex count of its 2k-grid cluster, a yes/no flag
// for "the cluster holds a k-path/cycle", and a materialized witness when the
// flag is set. The yes-cells live in a linked list so a decision query is one
// emptiness test and a witness query reads one list head.
//
// Must be driven in lockstep with the underlying GridIndex: apply_* after the
// grid has been updated.
class KPathIndex {
 public:
  KPathIndex(const GridIndex& grid, int k, solvers::PathMode mode);

  void apply_insert(VertexId v, Point p, CellId c);
  void apply_delete(VertexId v, Point p, CellId c);

  bool query_decision() const;
  std::optional<std::vector<VertexId>> query_witness() const;

  int k() const { return k_; }
  solvers::PathMode mode() const { return mode_; }
  long long cluster_threshold() const { return f_k_; }  // k(4k+1)^2

  // introspection for tests and the acceptance suite
  const std::list<CellId>& yes_list() const { return ilist_; }
  std::unordered_map<CellId, bool> flags() const;
  long long cluster_count(CellId c) const;
  std::uint64_t query_entry_accesses() const { return query_accesses_; }
  void check_invariants() const;

 private:
  struct CellEntry {
    long long cluster = 0;
    bool yes = false;
    std::vector<VertexId> witness;
    std::optional<std::list<CellId>::iterator> pos;
  };

  using SolveMemo =
      std::map<std::vector<VertexId>, std::optional<std::vector<VertexId>>>;

  void bootstrap();
  void apply(bool insert, CellId c);
  void recompute_flag(CellId c, CellEntry& e, SolveMemo& memo);
  void set_flag(CellId c, CellEntry& e, bool yes, std::vector<VertexId> wit);
  void dissociate(CellId c);

  const GridIndex* grid_;
  int k_;
  solvers::PathMode mode_;
  long long f_k_;
  std::unordered_map<CellId, CellEntry> entries_;
  std::list<CellId> ilist_;
  mutable std::uint64_t query_accesses_ = 0;
};

}  // namespace udg
