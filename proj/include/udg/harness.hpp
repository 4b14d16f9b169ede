#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "udg/core_cluster.hpp"
#include "udg/grid_index.hpp"
#include "udg/kpath_index.hpp"
#include "udg/shell_skeleton.hpp"
#include "udg/trace.hpp"
#include "udg/vc_kernel.hpp"

namespace udg {

struct QueryAnswer {
  int query_index = 0;
  QueryProblem problem = QueryProblem::vc;
  int k = 0;
  bool yes = false;
  std::vector<std::vector<VertexId>> witness;  // one group; k cycles for CP
  std::uint64_t nanos = 0;
};

struct Mismatch {
  int query_index = -1;
  std::string what;
};

struct StructureStats {
  int query_index = 0;
  std::size_t active = 0;
  std::size_t vc_kernel = 0;   // |V'|
  std::size_t core = 0;        // |V_core|
  std::size_t m_vertices = 0;  // |V(M)|
  std::size_t trees = 0;
};

struct RunReport {
  std::vector<QueryAnswer> answers;
  std::vector<StructureStats> stats;
  std::vector<Mismatch> mismatches;
  std::uint64_t update_count = 0;
  std::uint64_t update_nanos = 0;
  std::uint64_t query_nanos = 0;

  std::string answers_text() const;  // one "A <i> YES|NO [ids]" line per query
  std::string to_json() const;
};

struct RunOptions {
  std::vector<QueryProblem> problems = {QueryProblem::path, QueryProblem::vc,
                                        QueryProblem::ths, QueryProblem::fvs,
                                        QueryProblem::cp};
  // diff mode: assert module invariants and the golden skeleton comparison
  // after every event (small instances only)
  bool check_invariants = true;
};

// Drives the grid plus the selected structures in lockstep over a trace.
class TraceRunner {
 public:
  explicit TraceRunner(const RunOptions& opts);

  void apply(const TraceEvent& ev);  // header/insert/erase
  QueryAnswer query(const TraceEvent& ev, int query_index);
  StructureStats snapshot(int query_index);
  void assert_invariants();  // throws std::logic_error on breakage

  const GridIndex& grid() const { return grid_; }
  const std::unordered_map<VertexId, Point>& points() const {
    return shadow_points_;
  }
  KPathIndex* kpath() { return kpath_ ? &*kpath_ : nullptr; }
  VCKernel* vc() { return vc_ ? &*vc_ : nullptr; }
  CoreCluster* core() { return core_ ? &*core_ : nullptr; }
  ShellState* shell() { return shell_ ? &*shell_ : nullptr; }

 private:
  bool enabled(QueryProblem p) const;

  RunOptions opts_;
  GridIndex grid_;
  std::unordered_map<VertexId, Point> shadow_points_;
  std::optional<KPathIndex> kpath_;
  std::optional<VCKernel> vc_;
  std::optional<CoreCluster> core_;
  std::optional<ShellState> shell_;
};

RunReport run_trace(const std::vector<TraceEvent>& events,
                    const RunOptions& opts = {});

// Every query answered by both the live structure and the exhaustive oracle;
// decisions compared, witnesses validated, invariants asserted per event.
RunReport diff_run(const std::vector<TraceEvent>& events,
                   const RunOptions& opts = {});

// Self-contained: recomputes adjacency from the points, trusts nothing else.
bool verify_witness(QueryProblem problem,
                    const std::unordered_map<VertexId, Point>& points, int k,
                    const std::vector<std::vector<VertexId>>& witness,
                    solvers::PathMode mode = solvers::PathMode::path);

struct BenchParams {
  std::vector<int> sizes = {10000, 100000};
  double density = 1.0;  // points per unit square, fixed across sizes
  int measured_updates = 2000;
  int queries = 25;
  int query_k = 3;
  int baseline_samples = 25;
  std::uint64_t seed = 7;
  bool include_path = false;  // the path structure pays a solver per update
  int path_k = 3;
};

struct BenchRow {
  std::string structure;
  int n = 0;
  std::string op;  // update | query | static_rebuild
  double mean_ns = 0, p50_ns = 0, p99_ns = 0;
};

struct BenchReport {
  std::vector<BenchRow> rows;
  std::string to_csv() const;
  std::string to_json() const;
};

BenchReport bench_run(const BenchParams& params);

}  // namespace udg
