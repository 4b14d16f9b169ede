#include "udg/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>

#include "json.hpp"
#include "udg/error.hpp"

namespace udg {

namespace {

using Clock = std::chrono::steady_clock;

std::uint64_t since(Clock::time_point t0) {
  return static_cast<std::uint64_t>(
      std::chrono::duration_cast<std::chrono::nanoseconds>(Clock::now() - t0)
          .count());
}

SimpleGraph graph_of_points(
    const std::unordered_map<VertexId, Point>& points) {
  std::vector<VertexId> ids;
  ids.reserve(points.size());
  for (const auto& [v, p] : points) ids.push_back(v);
  std::sort(ids.begin(), ids.end());
  std::vector<std::pair<VertexId, VertexId>> edges;
  for (std::size_t i = 0; i < ids.size(); ++i)
    for (std::size_t j = i + 1; j < ids.size(); ++j)
      if (points_adjacent(points.at(ids[i]), points.at(ids[j])))
        edges.emplace_back(ids[i], ids[j]);
  return SimpleGraph::build(std::move(ids), std::move(edges));
}

Multigraph multigraph_of(const SimpleGraph& g) {
  Multigraph mg;
  mg.vertices = g.vertices;
  for (auto [a, b] : g.edges) mg.edges.push_back({a, b, {}});
  mg.finish();
  return mg;
}

}  // namespace

// ---------------------------------------------------------------------------
// runner
// ---------------------------------------------------------------------------

TraceRunner::TraceRunner(const RunOptions& opts) : opts_(opts) {
  if (enabled(QueryProblem::vc)) vc_.emplace(grid_);
  if (enabled(QueryProblem::ths) || enabled(QueryProblem::fvs) ||
      enabled(QueryProblem::cp))
    core_.emplace(grid_);
  if (enabled(QueryProblem::fvs) || enabled(QueryProblem::cp))
    shell_.emplace(grid_, *core_);
}

bool TraceRunner::enabled(QueryProblem p) const {
  for (QueryProblem q : opts_.problems)
    if (q == p) return true;
  return false;
}

void TraceRunner::apply(const TraceEvent& ev) {
  switch (ev.kind) {
    case TraceEvent::Kind::header:
      if (enabled(QueryProblem::path) && !kpath_)
        kpath_.emplace(grid_, ev.path_k, ev.path_mode);
      return;
    case TraceEvent::Kind::insert: {
      CellId c = grid_.insert_vertex(ev.vertex, ev.point);
      shadow_points_.emplace(ev.vertex, ev.point);
      if (kpath_) kpath_->apply_insert(ev.vertex, ev.point, c);
      if (vc_) vc_->apply_insert(ev.vertex, ev.point, c);
      if (core_) {
        auto delta = core_->apply_insert(ev.vertex, ev.point, c);
        if (shell_)
          shell_->apply_update(delta, UpdateOp::insert, ev.vertex, ev.point, c);
      }
      return;
    }
    case TraceEvent::Kind::erase: {
      Point p = grid_.point_of(ev.vertex);
      CellId c = grid_.erase_vertex(ev.vertex);
      shadow_points_.erase(ev.vertex);
      if (kpath_) kpath_->apply_delete(ev.vertex, p, c);
      if (vc_) vc_->apply_delete(ev.vertex, p, c);
      if (core_) {
        auto delta = core_->apply_delete(ev.vertex, p, c);
        if (shell_)
          shell_->apply_update(delta, UpdateOp::erase, ev.vertex, p, c);
      }
      return;
    }
    case TraceEvent::Kind::query:
      throw Error(ErrorCode::bad_parameter, "apply: query is not an update");
  }
}

QueryAnswer TraceRunner::query(const TraceEvent& ev, int query_index) {
  QueryAnswer ans;
  ans.query_index = query_index;
  ans.problem = ev.problem;
  ans.k = ev.k;
  auto t0 = Clock::now();
  switch (ev.problem) {
    case QueryProblem::path: {
      if (!kpath_)
        throw Error(ErrorCode::bad_parameter, "PATH query without a header");
      ans.yes = kpath_->query_decision();
      if (ans.yes) ans.witness.push_back(*kpath_->query_witness());
      break;
    }
    case QueryProblem::vc: {
      auto r = vc_->query_vc(ev.k);
      ans.yes = r.has_value();
      if (r) ans.witness.push_back(std::move(*r));
      break;
    }
    case QueryProblem::ths: {
      auto r = core_->query_ths(ev.k);
      ans.yes = r.has_value();
      if (r) ans.witness.push_back(std::move(*r));
      break;
    }
    case QueryProblem::fvs: {
      auto r = shell_->query_fvs(ev.k);
      ans.yes = r.has_value();
      if (r) ans.witness.push_back(std::move(*r));
      break;
    }
    case QueryProblem::cp: {
      auto r = shell_->query_cp(ev.k);
      ans.yes = r.has_value();
      if (r) ans.witness = std::move(*r);
      break;
    }
  }
  ans.nanos = since(t0);
  return ans;
}

StructureStats TraceRunner::snapshot(int query_index) {
  StructureStats st;
  st.query_index = query_index;
  st.active = grid_.size();
  if (vc_) st.vc_kernel = vc_->size();
  if (core_) st.core = core_->core_vertices().size();
  if (shell_) {
    auto s = shell_->stats();
    st.m_vertices = s.m_vertices;
    st.trees = s.trees;
  }
  return st;
}

void TraceRunner::assert_invariants() {
  if (kpath_) kpath_->check_invariants();
  if (vc_) vc_->check_invariants();
  if (core_) core_->check_invariants();
  if (shell_) {
    shell_->check_invariants();
    auto scratch = ShellState::rebuild_from_scratch(grid_, *core_);
    if (shell_->canonical_form() != scratch.canonical_form())
      throw std::logic_error("golden: incremental skeleton != scratch rebuild");
  }
  if (core_) {
    // every brute-force triangle lies inside the core
    auto g = graph_of_points(shadow_points_);
    for (auto [a, b] : g.edges)
      for (int c : g.adj[a]) {
        if (c <= b || !g.has_edge(b, c)) continue;
        for (int x : {a, b, c})
          if (!core_->in_core(g.vertices[x]))
            throw std::logic_error("triangle vertex escaped the core");
      }
  }
}

// ---------------------------------------------------------------------------
// run / diff
// ---------------------------------------------------------------------------

RunReport run_trace(const std::vector<TraceEvent>& events,
                    const RunOptions& opts) {
  RunReport report;
  TraceRunner runner(opts);
  int query_index = 0;
  for (const auto& ev : events) {
    if (ev.kind == TraceEvent::Kind::query) {
      auto ans = runner.query(ev, query_index);
      report.query_nanos += ans.nanos;
      report.answers.push_back(std::move(ans));
      report.stats.push_back(runner.snapshot(query_index));
      ++query_index;
    } else {
      auto t0 = Clock::now();
      runner.apply(ev);
      if (ev.kind != TraceEvent::Kind::header) {
        report.update_nanos += since(t0);
        ++report.update_count;
      }
    }
  }
  return report;
}

RunReport diff_run(const std::vector<TraceEvent>& events,
                   const RunOptions& opts) {
  RunReport report;
  TraceRunner runner(opts);
  int query_index = 0;
  solvers::PathMode path_mode = solvers::PathMode::path;
  for (const auto& ev : events) {
    if (ev.kind == TraceEvent::Kind::header) {
      path_mode = ev.path_mode;
      runner.apply(ev);
      continue;
    }
    if (ev.kind != TraceEvent::Kind::query) {
      auto t0 = Clock::now();
      runner.apply(ev);
      report.update_nanos += since(t0);
      ++report.update_count;
      if (opts.check_invariants) {
        try {
          runner.assert_invariants();
        } catch (const std::exception& e) {
          report.mismatches.push_back({-1, e.what()});
        }
      }
      continue;
    }

    auto ans = runner.query(ev, query_index);
    report.query_nanos += ans.nanos;
    report.stats.push_back(runner.snapshot(query_index));

    auto g = graph_of_points(runner.points());
    bool oracle_yes = false;
    switch (ev.problem) {
      case QueryProblem::path:
        oracle_yes =
            solvers::oracle_solve(solvers::Problem::path, g, ev.k, path_mode)
                .yes;
        break;
      case QueryProblem::vc:
        oracle_yes = solvers::oracle_solve(solvers::Problem::vc, g, ev.k).yes;
        break;
      case QueryProblem::ths:
        oracle_yes = solvers::oracle_solve(solvers::Problem::ths, g, ev.k).yes;
        break;
      case QueryProblem::fvs:
        oracle_yes =
            solvers::oracle_solve(solvers::Problem::fvs, multigraph_of(g), ev.k)
                .yes;
        break;
      case QueryProblem::cp:
        oracle_yes =
            solvers::oracle_solve(solvers::Problem::cp, multigraph_of(g), ev.k)
                .yes;
        break;
    }
    if (ans.yes != oracle_yes) {
      std::ostringstream os;
      os << "query " << query_index << " " << to_string(ev.problem)
         << " k=" << ev.k << ": structure says " << (ans.yes ? "YES" : "NO")
         << ", oracle says " << (oracle_yes ? "YES" : "NO");
      report.mismatches.push_back({query_index, os.str()});
    } else if (ans.yes && !verify_witness(ev.problem, runner.points(), ev.k,
                                          ans.witness, path_mode)) {
      std::ostringstream os;
      os << "query " << query_index << " " << to_string(ev.problem)
         << " k=" << ev.k << ": witness failed validation";
      report.mismatches.push_back({query_index, os.str()});
    }
    report.answers.push_back(std::move(ans));
    ++query_index;
  }
  return report;
}

// ---------------------------------------------------------------------------
// witness checking
// ---------------------------------------------------------------------------

bool verify_witness(QueryProblem problem,
                    const std::unordered_map<VertexId, Point>& points, int k,
                    const std::vector<std::vector<VertexId>>& witness,
                    solvers::PathMode mode) {
  auto active = [&](VertexId v) { return points.count(v) != 0; };
  auto adjacent = [&](VertexId u, VertexId v) {
    return points_adjacent(points.at(u), points.at(v));
  };

  switch (problem) {
    case QueryProblem::path: {
      if (witness.size() != 1) return false;
      const auto& seq = witness[0];
      if (static_cast<int>(seq.size()) != k) return false;
      std::set<VertexId> uniq(seq.begin(), seq.end());
      if (uniq.size() != seq.size()) return false;
      for (VertexId v : seq)
        if (!active(v)) return false;
      for (std::size_t i = 0; i + 1 < seq.size(); ++i)
        if (!adjacent(seq[i], seq[i + 1])) return false;
      if (mode == solvers::PathMode::cycle &&
          !adjacent(seq.back(), seq.front()))
        return false;
      return true;
    }
    case QueryProblem::vc: {
      if (witness.size() != 1) return false;
      const auto& cover = witness[0];
      if (static_cast<int>(cover.size()) > k) return false;
      std::set<VertexId> s(cover.begin(), cover.end());
      for (VertexId v : cover)
        if (!active(v)) return false;
      for (const auto& [u, pu] : points)
        for (const auto& [w, pw] : points)
          if (u < w && points_adjacent(pu, pw) && !s.count(u) && !s.count(w))
            return false;
      return true;
    }
    case QueryProblem::ths: {
      if (witness.size() != 1) return false;
      const auto& hit = witness[0];
      if (static_cast<int>(hit.size()) > k) return false;
      std::set<VertexId> s(hit.begin(), hit.end());
      for (VertexId v : hit)
        if (!active(v)) return false;
      std::vector<VertexId> ids;
      for (const auto& [v, p] : points) ids.push_back(v);
      std::sort(ids.begin(), ids.end());
      for (std::size_t i = 0; i < ids.size(); ++i)
        for (std::size_t j = i + 1; j < ids.size(); ++j) {
          if (!adjacent(ids[i], ids[j])) continue;
          for (std::size_t l = j + 1; l < ids.size(); ++l)
            if (adjacent(ids[i], ids[l]) && adjacent(ids[j], ids[l]) &&
                !s.count(ids[i]) && !s.count(ids[j]) && !s.count(ids[l]))
              return false;
        }
      return true;
    }
    case QueryProblem::fvs: {
      if (witness.size() != 1) return false;
      const auto& rm = witness[0];
      if (static_cast<int>(rm.size()) > k) return false;
      std::set<VertexId> s(rm.begin(), rm.end());
      for (VertexId v : rm)
        if (!active(v)) return false;
      std::vector<VertexId> ids;
      for (const auto& [v, p] : points)
        if (!s.count(v)) ids.push_back(v);
      std::sort(ids.begin(), ids.end());
      std::unordered_map<VertexId, VertexId> dsu;
      for (VertexId v : ids) dsu[v] = v;
      std::function<VertexId(VertexId)> find = [&](VertexId x) {
        while (dsu[x] != x) x = dsu[x] = dsu[dsu[x]];
        return x;
      };
      for (std::size_t i = 0; i < ids.size(); ++i)
        for (std::size_t j = i + 1; j < ids.size(); ++j) {
          if (!adjacent(ids[i], ids[j])) continue;
          VertexId a = find(ids[i]), b = find(ids[j]);
          if (a == b) return false;
          dsu[a] = b;
        }
      return true;
    }
    case QueryProblem::cp: {
      if (static_cast<int>(witness.size()) < k) return false;
      std::set<VertexId> used;
      for (const auto& cyc : witness) {
        if (cyc.size() < 3) return false;
        for (VertexId v : cyc) {
          if (!active(v)) return false;
          if (!used.insert(v).second) return false;
        }
        for (std::size_t i = 0; i < cyc.size(); ++i)
          if (!adjacent(cyc[i], cyc[(i + 1) % cyc.size()])) return false;
      }
      return true;
    }
  }
  return false;
}

// ---------------------------------------------------------------------------
// reports
// ---------------------------------------------------------------------------

std::string RunReport::answers_text() const {
  std::ostringstream os;
  for (const auto& a : answers) {
    os << "A " << a.query_index << (a.yes ? " YES" : " NO");
    bool first_group = true;
    for (const auto& group : a.witness) {
      if (!first_group) os << " |";
      first_group = false;
      for (VertexId v : group) os << " " << v;
    }
    os << "\n";
  }
  return os.str();
}

std::string RunReport::to_json() const {
  nlohmann::json j;
  j["answers"] = nlohmann::json::array();
  for (const auto& a : answers) {
    nlohmann::json ja;
    ja["index"] = a.query_index;
    ja["problem"] = to_string(a.problem);
    ja["k"] = a.k;
    ja["decision"] = a.yes ? "YES" : "NO";
    ja["witness"] = a.witness;
    ja["nanos"] = a.nanos;
    j["answers"].push_back(std::move(ja));
  }
  j["stats"] = nlohmann::json::array();
  for (const auto& s : stats) {
    nlohmann::json js;
    js["index"] = s.query_index;
    js["active"] = s.active;
    js["vc_kernel"] = s.vc_kernel;
    js["core"] = s.core;
    js["m_vertices"] = s.m_vertices;
    js["trees"] = s.trees;
    j["stats"].push_back(std::move(js));
  }
  j["mismatches"] = nlohmann::json::array();
  for (const auto& m : mismatches) {
    nlohmann::json jm;
    jm["index"] = m.query_index;
    jm["what"] = m.what;
    j["mismatches"].push_back(std::move(jm));
  }
  j["update_count"] = update_count;
  j["update_nanos"] = update_nanos;
  j["query_nanos"] = query_nanos;
  return j.dump(2);
}

// ---------------------------------------------------------------------------
// benchmark
// ---------------------------------------------------------------------------

namespace {

struct Percentiles {
  double mean = 0, p50 = 0, p99 = 0;
};

Percentiles percentiles(std::vector<std::uint64_t> ns) {
  Percentiles out;
  if (ns.empty()) return out;
  double sum = 0;
  for (auto x : ns) sum += static_cast<double>(x);
  out.mean = sum / static_cast<double>(ns.size());
  std::sort(ns.begin(), ns.end());
  out.p50 = static_cast<double>(ns[ns.size() / 2]);
  out.p99 = static_cast<double>(ns[std::min(ns.size() - 1, ns.size() * 99 / 100)]);
  return out;
}

struct BenchBundle {
  GridIndex grid;
  std::optional<KPathIndex> kpath;
  std::optional<VCKernel> vc;
  std::optional<CoreCluster> core;
  std::optional<ShellState> shell;

  void insert(VertexId v, Point p) {
    CellId c = grid.insert_vertex(v, p);
    if (kpath) kpath->apply_insert(v, p, c);
    if (vc) vc->apply_insert(v, p, c);
    if (core) {
      auto delta = core->apply_insert(v, p, c);
      if (shell) shell->apply_update(delta, UpdateOp::insert, v, p, c);
    }
  }
  void erase(VertexId v) {
    Point p = grid.point_of(v);
    CellId c = grid.erase_vertex(v);
    if (kpath) kpath->apply_delete(v, p, c);
    if (vc) vc->apply_delete(v, p, c);
    if (core) {
      auto delta = core->apply_delete(v, p, c);
      if (shell) shell->apply_update(delta, UpdateOp::erase, v, p, c);
    }
  }
};

void push_rows(BenchReport& report, const std::string& structure, int n,
               const std::string& op, const std::vector<std::uint64_t>& ns) {
  auto p = percentiles(ns);
  report.rows.push_back({structure, n, op, p.mean, p.p50, p.p99});
}

}  // namespace

BenchReport bench_run(const BenchParams& params) {
  BenchReport report;
  for (int n : params.sizes) {
    double side = std::sqrt(static_cast<double>(n) / params.density);
    struct Setup {
      std::string name;
      bool vc, core, shell, path;
    };
    std::vector<Setup> setups = {{"vc", true, false, false, false},
                                 {"ths", false, true, false, false},
                                 {"fvs_cp", false, true, true, false}};
    if (params.include_path) setups.push_back({"path", false, false, false, true});

    for (const auto& setup : setups) {
      std::mt19937_64 rng(params.seed ^ (std::uint64_t)n * 0x9E3779B9u);
      std::uniform_real_distribution<double> coord(0.0, side);
      BenchBundle b;
      if (setup.vc) b.vc.emplace(b.grid);
      if (setup.core) b.core.emplace(b.grid);
      if (setup.shell) b.shell.emplace(b.grid, *b.core);
      if (setup.path)
        b.kpath.emplace(b.grid, params.path_k, solvers::PathMode::path);

      std::vector<VertexId> active;
      VertexId next_id = 0;
      for (int i = 0; i < n; ++i) {
        b.insert(next_id, {coord(rng), coord(rng)});
        active.push_back(next_id++);
      }

      std::vector<std::uint64_t> update_ns;
      update_ns.reserve(params.measured_updates);
      for (int i = 0; i < params.measured_updates; ++i) {
        if (i % 2 == 0) {
          std::size_t pick = rng() % active.size();
          VertexId victim = active[pick];
          active[pick] = active.back();
          active.pop_back();
          auto t0 = Clock::now();
          b.erase(victim);
          update_ns.push_back(since(t0));
        } else {
          Point p{coord(rng), coord(rng)};
          auto t0 = Clock::now();
          b.insert(next_id, p);
          update_ns.push_back(since(t0));
          active.push_back(next_id++);
        }
      }
      push_rows(report, setup.name, n, "update", update_ns);

      std::vector<std::uint64_t> query_ns;
      for (int i = 0; i < params.queries; ++i) {
        auto t0 = Clock::now();
        if (setup.vc) (void)b.vc->query_vc(params.query_k);
        if (setup.name == "ths") (void)b.core->query_ths(params.query_k);
        if (setup.shell) (void)b.shell->query_fvs(params.query_k);
        if (setup.path) (void)b.kpath->query_decision();
        query_ns.push_back(since(t0));
      }
      push_rows(report, setup.name, n, "query", query_ns);

      std::vector<std::uint64_t> rebuild_ns;
      for (int i = 0; i < params.baseline_samples; ++i) {
        auto t0 = Clock::now();
        if (setup.vc) (void)VCKernel::compute_members(b.grid);
        if (setup.name == "ths") (void)CoreCluster::compute_core_cells(b.grid);
        if (setup.shell) {
          // the static alternative recomputes both kernels per update
          (void)CoreCluster::compute_core_cells(b.grid);
          (void)ShellState::rebuild_from_scratch(b.grid, *b.core);
        }
        if (setup.path) {
          KPathIndex fresh(b.grid, params.path_k, solvers::PathMode::path);
          (void)fresh.query_decision();
        }
        rebuild_ns.push_back(since(t0));
      }
      push_rows(report, setup.name, n, "static_rebuild", rebuild_ns);
    }
  }
  return report;
}

std::string BenchReport::to_csv() const {
  std::ostringstream os;
  os << "structure,n,op,mean_ns,p50_ns,p99_ns\n";
  for (const auto& r : rows)
    os << r.structure << "," << r.n << "," << r.op << "," << r.mean_ns << ","
       << r.p50_ns << "," << r.p99_ns << "\n";
  return os.str();
}

std::string BenchReport::to_json() const {
  nlohmann::json j = nlohmann::json::array();
  for (const auto& r : rows) {
    nlohmann::json jr;
    jr["structure"] = r.structure;
    jr["n"] = r.n;
    jr["op"] = r.op;
    jr["mean_ns"] = r.mean_ns;
    jr["p50_ns"] = r.p50_ns;
    jr["p99_ns"] = r.p99_ns;
    j.push_back(std::move(jr));
  }
  return j.dump(2);
}

}  // namespace udg
