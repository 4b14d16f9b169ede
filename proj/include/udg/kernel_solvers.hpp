#pragma once

#include <optional>
#include <vector>

#include "udg/graphs.hpp"

namespace udg::solvers {

enum class PathMode { path, cycle };

struct KPathOptions {
  // Node-expansion budget for the first pruned-DFS pass on graphs with more
  // than 20 vertices. When exhausted, the color-coding schedule runs before
  // an unbounded exact DFS. Deterministic either way.
  long long dfs_budget = 2'000'000;
};

// Exact: returns a witness iff one exists. PATH needs k >= 2, CYCLE k >= 3.
std::optional<std::vector<VertexId>> solve_kpath(const SimpleGraph& g, int k,
                                                 PathMode mode,
                                                 const KPathOptions& opts = {});

// Exact bounded search tree with maximal-matching pruning.
std::optional<std::vector<VertexId>> solve_vc(const SimpleGraph& g, int k);

// Exact 3-way branching on a remaining triangle.
std::optional<std::vector<VertexId>> solve_ths(const SimpleGraph& g, int k);

// Exact on multigraphs with loops and parallel edges: reductions
// (degree <= 1, forced loop vertices, degree-2 suppression) then branching
// on a shortest cycle.
std::optional<std::vector<VertexId>> solve_fvs(const Multigraph& g, int k);

// A cycle in a multigraph: vertex index sequence plus the edge index used
// between consecutive vertices (closing edge last; loops have one vertex and
// one edge, parallel 2-cycles two of each).
struct PackedCycle {
  std::vector<int> verts;
  std::vector<int> edge_ids;
};

// Exact backtracking over chordless cycles through the minimum-id vertex.
std::optional<std::vector<PackedCycle>> solve_cp(const Multigraph& g, int k);

enum class BoundKind { matching, triangles };

struct GreedyBound {
  int count = 0;
  std::vector<std::vector<VertexId>> groups;  // matched pairs / triangles
};

// Greedy maximal matching / vertex-disjoint triangle packing by min id.
// Valid lower bound on min vertex cover / min triangle hitting set.
// stop_after > 0 stops early once that many groups are found.
GreedyBound greedy_bounds(const SimpleGraph& g, BoundKind kind,
                          int stop_after = -1);

// Greedy vertex-disjoint cycle packing, shortest cycles first; lower bound on
// both min feedback vertex set and max cycle packing.
std::vector<PackedCycle> greedy_cycle_packing(const Multigraph& g,
                                              int stop_after = -1);

// Exhaustive ground-truth oracles. Guards: <= 40 vertices for the subset
// problems, k <= 6 for path/cycle.
enum class Problem { path, vc, ths, fvs, cp };

struct OracleResult {
  bool yes = false;
  std::vector<std::vector<VertexId>> witness;  // one group, or k cycles for cp
};

OracleResult oracle_solve(Problem p, const SimpleGraph& g, int k,
                          PathMode mode = PathMode::path);
OracleResult oracle_solve(Problem p, const Multigraph& g, int k);  // fvs, cp

}  // namespace udg::solvers
