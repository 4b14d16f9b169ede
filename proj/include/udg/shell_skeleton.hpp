#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include "udg/core_cluster.hpp"
#include "udg/graphs.hpp"
#include "udg/grid_index.hpp"
#include "udg/lc_forest.hpp"

namespace udg {

using EdgeId = std::uint64_t;

// Skeleton of the shell (the unit disk graph outside the core): the minor M
// kept as a multigraph with loops, plus the contracted forest over the shell
// vertices absent from M, with at most two bridges per tree. Updated by
// push/pop surgery followed by a cleaning pass; queried by gluing M onto the
// core. Query methods are non-const because link-cut lookups restructure.
class ShellState {
 public:
  ShellState(const GridIndex& grid, const CoreCluster& core);

  // Call once per grid/core update, after CoreCluster::apply_*.
  void apply_update(const CoreCluster::Delta& delta, UpdateOp op, VertexId v,
                    Point p, CellId c);

  Multigraph glue_kernel();
  std::optional<std::vector<VertexId>> query_fvs(int k);
  std::optional<std::vector<std::vector<VertexId>>> query_cp(int k);

  bool in_shell(VertexId v) const {
    return m_.count(v) != 0 || node_of_.count(v) != 0;
  }
  bool in_m(VertexId v) const { return m_.count(v) != 0; }
  bool in_forest(VertexId v) const { return node_of_.count(v) != 0; }

  struct Stats {
    std::size_t m_vertices = 0;
    std::size_t m_edges = 0;
    std::size_t trees = 0;
  };
  Stats stats();

  // Reference construction and the canonical comparator behind the golden
  // incremental-equals-scratch invariant.
  static ShellState rebuild_from_scratch(const GridIndex& grid,
                                         const CoreCluster& core);
  std::string canonical_form();

  std::vector<VertexId> expand_edge(EdgeId e);  // full path, endpoints included
  void check_invariants();

 private:
  struct MVertex {
    bool boundary = false;
    bool special = false;
    bool anchor = false;
    std::vector<EdgeId> edges;  // loops listed once
  };
  struct Edge {
    VertexId u = 0;
    VertexId v = 0;
    bool contracted = false;
  };
  struct Bridge {
    VertexId tree_v = 0;
    VertexId m_v = 0;
  };
  struct TreeRec {
    std::vector<Bridge> bridges;   // at most two
    std::optional<EdgeId> m_edge;  // present iff two bridges
  };

  NodeId node(VertexId v) const { return node_of_.at(v); }
  bool compute_boundary(VertexId v) const;
  int eff_degree(VertexId v) const;

  EdgeId add_edge(VertexId u, VertexId v, bool contracted);
  void remove_edge(EdgeId e);

  TreeRec take_rec(VertexId any_tree_vertex);
  void put_rec(VertexId any_tree_vertex, TreeRec rec);

  void forest_add(VertexId v);
  void forest_remove(VertexId v);
  void forest_link(VertexId a, VertexId b);
  std::vector<VertexId> forest_cut_all(VertexId v);

  void push_vertex(VertexId v);
  void push_tree_edge(VertexId v, VertexId u);
  void attach_side(VertexId p, VertexId t, VertexId m,
                   const std::vector<VertexId>& parts,
                   std::vector<char>& part_used);
  void pop_vertex(VertexId v);
  void pop_m_vertex(VertexId v);
  void pop_tree_vertex(VertexId v);
  void clean();
  void demote(VertexId v, std::set<VertexId>& work);

  std::vector<VertexId> tree_path(VertexId a, VertexId b) const;

  const GridIndex* grid_;
  const CoreCluster* core_;

  std::unordered_map<VertexId, MVertex> m_;
  std::unordered_map<EdgeId, Edge> edges_;
  EdgeId next_edge_ = 0;

  LinkCutForest forest_;
  std::unordered_map<VertexId, NodeId> node_of_;
  std::unordered_map<NodeId, VertexId> vertex_of_;
  std::unordered_map<VertexId, std::vector<VertexId>> tree_adj_;
  std::unordered_map<NodeId, TreeRec> tree_recs_;  // keyed by current root
  std::unordered_map<EdgeId, VertexId> edge_tree_rep_;
  std::unordered_map<VertexId, std::vector<VertexId>> bridges_at_m_;

  std::set<VertexId> specials_;
  std::set<VertexId> clean_queue_;
};

}  // namespace udg
