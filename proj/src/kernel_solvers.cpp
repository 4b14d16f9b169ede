#include "udg/kernel_solvers.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <deque>
#include <functional>
#include <numeric>
#include <random>
#include <string>

#include "udg/error.hpp"

namespace udg::solvers {

namespace {

std::vector<VertexId> to_ids(const SimpleGraph& g, const std::vector<int>& idx) {
  std::vector<VertexId> out;
  out.reserve(idx.size());
  for (int i : idx) out.push_back(g.vertices[i]);
  return out;
}

std::vector<VertexId> sorted_ids(const SimpleGraph& g, std::vector<int> idx) {
  std::sort(idx.begin(), idx.end());
  return to_ids(g, idx);
}

// ---------------------------------------------------------------------------
// k-path / k-cycle
// ---------------------------------------------------------------------------

struct PathDfs {
  const SimpleGraph& g;
  int k;
  PathMode mode;
  long long budget;  // < 0 means unbounded
  bool exhausted = false;
  std::vector<char> used;
  std::vector<int> path;
  std::vector<int> stack_buf;
  std::vector<char> seen;

  PathDfs(const SimpleGraph& gg, int kk, PathMode m, long long b)
      : g(gg), k(kk), mode(m), budget(b), used(gg.n(), 0), seen(gg.n(), 0) {}

  // Unused vertices reachable from the current endpoint.
  int reachable_unused(int from) {
    std::fill(seen.begin(), seen.end(), 0);
    stack_buf.clear();
    int count = 0;
    for (int w : g.adj[from])
      if (!used[w] && !seen[w]) {
        seen[w] = 1;
        stack_buf.push_back(w);
        ++count;
      }
    while (!stack_buf.empty()) {
      int x = stack_buf.back();
      stack_buf.pop_back();
      for (int w : g.adj[x])
        if (!used[w] && !seen[w]) {
          seen[w] = 1;
          stack_buf.push_back(w);
          ++count;
        }
    }
    return count;
  }

  bool dfs(int start) {
    if (budget >= 0 && --budget < 0) {
      exhausted = true;
      return false;
    }
    int len = static_cast<int>(path.size());
    int last = path.back();
    if (len == k) {
      if (mode == PathMode::path) return true;
      return g.has_edge(last, start);
    }
    if (reachable_unused(last) < k - len) return false;
    for (int w : g.adj[last]) {
      if (used[w]) continue;
      if (mode == PathMode::cycle && w < start) continue;
      used[w] = 1;
      path.push_back(w);
      if (dfs(start)) return true;
      path.pop_back();
      used[w] = 0;
      if (exhausted) return false;
    }
    return false;
  }

  std::optional<std::vector<int>> run() {
    for (int s = 0; s < g.n(); ++s) {
      std::fill(used.begin(), used.end(), 0);
      path.assign(1, s);
      used[s] = 1;
      if (dfs(s)) return path;
      if (exhausted) return std::nullopt;
    }
    return std::nullopt;
  }
};

int color_trials(int k) {
  double p = 1.0;
  for (int i = 1; i <= k; ++i) p *= static_cast<double>(i) / k;
  double t = std::ceil(20.0 * std::log(2.0) / -std::log1p(-p));
  return static_cast<int>(t);
}

std::uint64_t mix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

// dp[v] holds one bit per color subset reachable as a colorful path ending at
// v (k <= 6, so subsets fit a word).
void relax_rounds(const SimpleGraph& g, const std::vector<int>& color, int k,
                  std::vector<std::uint64_t>& dp) {
  for (int round = 1; round < k; ++round) {
    for (auto [a, b] : g.edges) {
      for (int dir = 0; dir < 2; ++dir) {
        int x = dir ? b : a, y = dir ? a : b;
        std::uint64_t bits = dp[x];
        int cy = color[y];
        while (bits) {
          int s = std::countr_zero(bits);
          bits &= bits - 1;
          if (!((s >> cy) & 1)) dp[y] |= 1ull << (s | (1 << cy));
        }
      }
    }
  }
}

std::vector<int> backtrack_colorful(const SimpleGraph& g,
                                    const std::vector<int>& color,
                                    const std::vector<std::uint64_t>& dp,
                                    int end, int full) {
  std::vector<int> rev{end};
  int cur = end, s = full;
  while (std::popcount(static_cast<unsigned>(s)) > 1) {
    int prev_s = s & ~(1 << color[cur]);
    for (int u : g.adj[cur]) {
      if (dp[u] & (1ull << prev_s)) {
        cur = u;
        s = prev_s;
        rev.push_back(cur);
        break;
      }
    }
  }
  std::reverse(rev.begin(), rev.end());
  return rev;
}

std::optional<std::vector<int>> color_coding(const SimpleGraph& g, int k,
                                             PathMode mode) {
  if (k > 6) return std::nullopt;  // schedule sized for small k only
  int n = g.n();
  int trials = color_trials(k);
  int full = (1 << k) - 1;
  std::vector<int> color(n);
  std::vector<std::uint64_t> dp(n);
  for (int t = 0; t < trials; ++t) {
    std::mt19937_64 rng(mix64(0x7B5C'A5E1ull ^ (std::uint64_t)k * 1315423911u ^
                              ((mode == PathMode::cycle) ? 0xF00Dull : 0) ^
                              (std::uint64_t)t));
    for (int i = 0; i < n; ++i) color[i] = static_cast<int>(rng() % k);
    if (mode == PathMode::path) {
      std::fill(dp.begin(), dp.end(), 0);
      for (int v = 0; v < n; ++v) dp[v] |= 1ull << (1 << color[v]);
      relax_rounds(g, color, k, dp);
      for (int v = 0; v < n; ++v)
        if (dp[v] & (1ull << full)) return backtrack_colorful(g, color, dp, v, full);
    } else {
      for (int s = 0; s < n; ++s) {
        if (color[s] != 0) continue;  // the cycle's unique color-0 vertex
        std::fill(dp.begin(), dp.end(), 0);
        dp[s] = 1ull << 1;  // subset {0}
        relax_rounds(g, color, k, dp);
        for (int v : g.adj[s])
          if (dp[v] & (1ull << full))
            return backtrack_colorful(g, color, dp, v, full);
      }
    }
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// vertex cover
// ---------------------------------------------------------------------------

int matching_lower_bound(const SimpleGraph& g, const std::vector<char>& covered,
                         int stop_above) {
  std::vector<char> used(g.n(), 0);
  int count = 0;
  for (auto [a, b] : g.edges) {
    if (covered[a] || covered[b] || used[a] || used[b]) continue;
    used[a] = used[b] = 1;
    if (++count > stop_above) break;
  }
  return count;
}

bool vc_rec(const SimpleGraph& g, std::vector<char>& covered,
            std::vector<int>& chosen, int k) {
  int ea = -1, eb = -1;
  for (auto [a, b] : g.edges)
    if (!covered[a] && !covered[b]) {
      ea = a;
      eb = b;
      break;
    }
  if (ea < 0) return true;
  int left = k - static_cast<int>(chosen.size());
  if (left <= 0) return false;
  if (matching_lower_bound(g, covered, left) > left) return false;
  for (int pick : {ea, eb}) {
    covered[pick] = 1;
    chosen.push_back(pick);
    if (vc_rec(g, covered, chosen, k)) return true;
    chosen.pop_back();
    covered[pick] = 0;
  }
  return false;
}

// ---------------------------------------------------------------------------
// triangle hitting
// ---------------------------------------------------------------------------

std::optional<std::array<int, 3>> first_triangle(const SimpleGraph& g,
                                                 const std::vector<char>& dead) {
  for (auto [a, b] : g.edges) {
    if (dead[a] || dead[b]) continue;
    for (int c : g.adj[a]) {
      if (c <= b || dead[c]) continue;
      if (g.has_edge(b, c)) return std::array<int, 3>{a, b, c};
    }
  }
  return std::nullopt;
}

bool ths_rec(const SimpleGraph& g, std::vector<char>& dead,
             std::vector<int>& chosen, int k) {
  auto tri = first_triangle(g, dead);
  if (!tri) return true;
  if (static_cast<int>(chosen.size()) >= k) return false;
  for (int pick : *tri) {
    dead[pick] = 1;
    chosen.push_back(pick);
    if (ths_rec(g, dead, chosen, k)) return true;
    chosen.pop_back();
    dead[pick] = 0;
  }
  return false;
}

// ---------------------------------------------------------------------------
// shared multigraph workspace
// ---------------------------------------------------------------------------

struct Work {
  // Mutable view of a multigraph; suppression may append fresh edges.
  std::vector<char> valive;
  std::vector<char> ealive;
  std::vector<std::array<int, 2>> ends;                 // edge -> endpoints
  std::vector<std::vector<std::pair<int, int>>> inc;    // v -> (edge, other)
  std::vector<int> deg;                                 // loops count twice
  std::vector<int> loops;                               // live loop count per vertex
  int n_alive = 0;
  int m_alive = 0;

  explicit Work(const Multigraph& g)
      : valive(g.n(), 1),
        ealive(g.m(), 1),
        inc(g.n()),
        deg(g.n(), 0),
        loops(g.n(), 0),
        n_alive(g.n()),
        m_alive(g.m()) {
    ends.reserve(g.m());
    for (int e = 0; e < g.m(); ++e) {
      auto& me = g.edges[e];
      ends.push_back({me.a, me.b});
      inc[me.a].emplace_back(e, me.b);
      if (me.b != me.a) inc[me.b].emplace_back(e, me.a);
      deg[me.a] += 1 + (me.a == me.b);
      if (me.b != me.a) deg[me.b]++;
      if (me.a == me.b) loops[me.a]++;
    }
  }

  void kill_edge(int e) {
    if (!ealive[e]) return;
    ealive[e] = 0;
    --m_alive;
    auto [a, b] = ends[e];
    deg[a] -= 1 + (a == b);
    if (b != a) deg[b]--;
    if (a == b) loops[a]--;
  }

  void kill_vertex(int v) {
    for (auto [e, o] : inc[v]) {
      (void)o;
      kill_edge(e);
    }
    valive[v] = 0;
    --n_alive;
  }

  int add_edge(int a, int b) {
    int e = static_cast<int>(ends.size());
    ends.push_back({a, b});
    ealive.push_back(1);
    ++m_alive;
    inc[a].emplace_back(e, b);
    if (b != a) inc[b].emplace_back(e, a);
    deg[a] += 1 + (a == b);
    if (b != a) deg[b]++;
    if (a == b) loops[a]++;
    return e;
  }

  // Sorted unique live neighbors (excluding v itself).
  std::vector<int> simple_adj(int v) const {
    std::vector<int> out;
    for (auto [e, o] : inc[v])
      if (ealive[e] && o != v) out.push_back(o);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  }

  int parallel_count(int v, int u) const {
    int c = 0;
    for (auto [e, o] : inc[v])
      if (ealive[e] && o == u) ++c;
    return c;
  }
};

// ---------------------------------------------------------------------------
// feedback vertex set
// ---------------------------------------------------------------------------

bool fvs_reduce(Work& w, std::vector<int>& chosen, int& k) {
  std::deque<int> queue;
  for (int v = 0; v < static_cast<int>(w.valive.size()); ++v)
    if (w.valive[v]) queue.push_back(v);
  while (!queue.empty()) {
    int v = queue.front();
    queue.pop_front();
    if (!w.valive[v]) continue;
    if (w.loops[v] > 0) {
      // A loop forces its vertex into the solution.
      chosen.push_back(v);
      auto nbrs = w.simple_adj(v);
      w.kill_vertex(v);
      if (--k < 0) return false;
      for (int u : nbrs) queue.push_back(u);
      continue;
    }
    if (w.deg[v] <= 1) {
      auto nbrs = w.simple_adj(v);
      w.kill_vertex(v);
      for (int u : nbrs) queue.push_back(u);
      continue;
    }
    if (w.deg[v] == 2) {
      // Suppress: replace a-v-b with a single a-b edge (loop when a == b).
      int a = -1, b = -1;
      for (auto [e, o] : w.inc[v])
        if (w.ealive[e]) (a < 0 ? a : b) = o;
      w.kill_vertex(v);
      w.add_edge(a, b);
      queue.push_back(a);
      queue.push_back(b);
    }
  }
  return true;
}

// Some cycle in the reduced graph, short when easy: a parallel pair if one
// exists, else a cycle found via BFS from every vertex.
std::vector<int> find_cycle(const Work& w) {
  int n = static_cast<int>(w.valive.size());
  for (int v = 0; v < n; ++v) {
    if (!w.valive[v]) continue;
    for (int u : w.simple_adj(v))
      if (u > v && w.parallel_count(v, u) >= 2) return {v, u};
  }
  std::vector<int> best;
  std::vector<int> dist(n), parent(n);
  for (int s = 0; s < n; ++s) {
    if (!w.valive[s]) continue;
    if (best.size() == 3) break;  // nothing shorter exists in the simple part
    std::fill(dist.begin(), dist.end(), -1);
    dist[s] = 0;
    parent[s] = -1;
    std::deque<int> q{s};
    while (!q.empty()) {
      int x = q.front();
      q.pop_front();
      for (int y : w.simple_adj(x)) {
        if (dist[y] < 0) {
          dist[y] = dist[x] + 1;
          parent[y] = x;
          q.push_back(y);
        } else if (parent[x] != y && parent[y] != x) {
          // walk both sides to the meeting point
          std::vector<int> px{x}, py{y};
          int a = x, b = y;
          while (a != b) {
            if (dist[a] >= dist[b]) {
              a = parent[a];
              px.push_back(a);
            } else {
              b = parent[b];
              py.push_back(b);
            }
          }
          std::vector<int> cyc(px.begin(), px.end());
          for (auto it = py.rbegin() + 1; it != py.rend(); ++it)
            cyc.push_back(*it);
          if (best.empty() || cyc.size() < best.size()) best = cyc;
        }
      }
    }
  }
  return best;
}

bool fvs_rec(Work w, std::vector<int> chosen, int k,
             std::vector<int>& out) {
  if (!fvs_reduce(w, chosen, k)) return false;
  if (w.m_alive == 0) {
    out = std::move(chosen);
    return true;
  }
  if (k <= 0) return false;
  std::vector<int> cyc = find_cycle(w);
  std::sort(cyc.begin(), cyc.end());
  for (int v : cyc) {
    Work w2 = w;
    std::vector<int> c2 = chosen;
    c2.push_back(v);
    w2.kill_vertex(v);
    if (fvs_rec(std::move(w2), std::move(c2), k - 1, out)) return true;
  }
  return false;
}

// ---------------------------------------------------------------------------
// cycle packing
// ---------------------------------------------------------------------------

int min_live_edge(const Work& w, int a, int b) {
  int best = -1;
  for (auto [e, o] : w.inc[a])
    if (w.ealive[e] && o == b && (best < 0 || e < best)) best = e;
  return best;
}

int min_live_loop(const Work& w, int v) {
  int best = -1;
  for (auto [e, o] : w.inc[v])
    if (w.ealive[e] && o == v && w.ends[e][0] == w.ends[e][1] &&
        (best < 0 || e < best))
      best = e;
  return best;
}

PackedCycle make_cycle(const Work& w, const std::vector<int>& verts) {
  PackedCycle c;
  c.verts = verts;
  int L = static_cast<int>(verts.size());
  if (L == 1) {
    c.edge_ids.push_back(min_live_loop(w, verts[0]));
  } else if (L == 2) {
    int e1 = min_live_edge(w, verts[0], verts[1]);
    int e2 = -1;
    for (auto [e, o] : w.inc[verts[0]])
      if (w.ealive[e] && o == verts[1] && e != e1 && (e2 < 0 || e < e2)) e2 = e;
    c.edge_ids = {e1, e2};
  } else {
    for (int i = 0; i < L; ++i)
      c.edge_ids.push_back(min_live_edge(w, verts[i], verts[(i + 1) % L]));
  }
  return c;
}

// Chordless cycles through v, v the minimum live vertex. Two-vertex cycles
// come from parallel pairs; longer ones from induced-path extension.
void chordless_through(const Work& w, int v, std::vector<std::vector<int>>& out) {
  auto adj_v = w.simple_adj(v);
  for (int u : adj_v)
    if (w.parallel_count(v, u) >= 2) out.push_back({v, u});

  std::vector<int> path{v};
  std::vector<char> on_path(w.valive.size(), 0);
  on_path[v] = 1;
  auto adjacent = [&](int a, int b) { return min_live_edge(w, a, b) >= 0; };

  std::function<void(int)> extend = [&](int last) {
    for (int u : w.simple_adj(last)) {
      if (on_path[u]) continue;
      bool chord = false;
      // u must see only `last` among the interior path vertices
      for (std::size_t i = 1; i + 1 < path.size() && !chord; ++i)
        if (adjacent(u, path[i])) chord = true;
      if (chord) continue;
      if (path.size() >= 2 && adjacent(u, v)) {
        if (path[1] < u) {  // one orientation per cycle
          auto cyc = path;
          cyc.push_back(u);
          out.push_back(cyc);
        }
        continue;  // extending past a v-neighbor would leave a chord
      }
      on_path[u] = 1;
      path.push_back(u);
      extend(u);
      path.pop_back();
      on_path[u] = 0;
    }
  };
  extend(v);
}

int component_count(const Work& w) {
  int n = static_cast<int>(w.valive.size());
  std::vector<char> seen(n, 0);
  int comps = 0;
  for (int s = 0; s < n; ++s) {
    if (!w.valive[s] || seen[s]) continue;
    ++comps;
    std::deque<int> q{s};
    seen[s] = 1;
    while (!q.empty()) {
      int x = q.front();
      q.pop_front();
      for (int y : w.simple_adj(x))
        if (!seen[y]) {
          seen[y] = 1;
          q.push_back(y);
        }
    }
  }
  return comps;
}

void cp_reduce(Work& w) {
  std::deque<int> queue;
  for (int v = 0; v < static_cast<int>(w.valive.size()); ++v)
    if (w.valive[v]) queue.push_back(v);
  while (!queue.empty()) {
    int v = queue.front();
    queue.pop_front();
    if (!w.valive[v] || w.deg[v] > 1) continue;
    auto nbrs = w.simple_adj(v);
    w.kill_vertex(v);
    for (int u : nbrs) queue.push_back(u);
  }
}

bool cp_rec(Work w, int k, std::vector<PackedCycle>& acc) {
  if (k <= 0) return true;
  cp_reduce(w);
  if (w.n_alive == 0) return false;
  if (w.m_alive - w.n_alive + component_count(w) < k) return false;

  int v = 0;
  while (!w.valive[v]) ++v;

  if (w.loops[v] > 0) {
    // Any packing that uses v can use the loop instead.
    auto cyc = make_cycle(w, {v});
    Work w2 = w;
    w2.kill_vertex(v);
    acc.push_back(cyc);
    if (cp_rec(std::move(w2), k - 1, acc)) return true;
    acc.pop_back();
    w.kill_vertex(v);
    return cp_rec(std::move(w), k, acc);
  }

  std::vector<std::vector<int>> cycles;
  chordless_through(w, v, cycles);
  std::sort(cycles.begin(), cycles.end(),
            [](const std::vector<int>& a, const std::vector<int>& b) {
              if (a.size() != b.size()) return a.size() < b.size();
              return a < b;
            });
  for (const auto& verts : cycles) {
    Work w2 = w;
    acc.push_back(make_cycle(w, verts));
    for (int x : verts) w2.kill_vertex(x);
    if (cp_rec(std::move(w2), k - 1, acc)) return true;
    acc.pop_back();
  }
  w.kill_vertex(v);
  return cp_rec(std::move(w), k, acc);
}

}  // namespace

// ---------------------------------------------------------------------------
// public entry points
// ---------------------------------------------------------------------------

std::optional<std::vector<VertexId>> solve_kpath(const SimpleGraph& g, int k,
                                                 PathMode mode,
                                                 const KPathOptions& opts) {
  if ((mode == PathMode::path && k < 2) || (mode == PathMode::cycle && k < 3))
    throw Error(ErrorCode::bad_parameter,
                "solve_kpath: k too small for mode");
  if (k > g.n()) return std::nullopt;

  auto finish = [&](const std::optional<std::vector<int>>& r)
      -> std::optional<std::vector<VertexId>> {
    if (!r) return std::nullopt;
    return to_ids(g, *r);
  };

  if (g.n() <= 20) {
    PathDfs dfs(g, k, mode, -1);
    return finish(dfs.run());
  }
  {
    PathDfs dfs(g, k, mode, opts.dfs_budget);
    auto r = dfs.run();
    if (!dfs.exhausted) return finish(r);
  }
  if (auto r = color_coding(g, k, mode)) return finish(r);
  PathDfs dfs(g, k, mode, -1);
  return finish(dfs.run());
}

std::optional<std::vector<VertexId>> solve_vc(const SimpleGraph& g, int k) {
  std::vector<char> covered(g.n(), 0);
  std::vector<int> chosen;
  if (k < 0) return std::nullopt;
  if (!vc_rec(g, covered, chosen, k)) return std::nullopt;
  return sorted_ids(g, chosen);
}

std::optional<std::vector<VertexId>> solve_ths(const SimpleGraph& g, int k) {
  if (k < 0) return std::nullopt;
  std::vector<char> dead(g.n(), 0);
  std::vector<int> chosen;
  if (!ths_rec(g, dead, chosen, k)) return std::nullopt;
  return sorted_ids(g, chosen);
}

std::optional<std::vector<VertexId>> solve_fvs(const Multigraph& g, int k) {
  if (k < 0) return std::nullopt;
  Work w(g);
  std::vector<int> out;
  if (!fvs_rec(std::move(w), {}, k, out)) return std::nullopt;
  std::sort(out.begin(), out.end());
  std::vector<VertexId> ids;
  for (int i : out) ids.push_back(g.vertices[i]);
  return ids;
}

std::optional<std::vector<PackedCycle>> solve_cp(const Multigraph& g, int k) {
  std::vector<PackedCycle> acc;
  if (k <= 0) return acc;
  Work w(g);
  if (!cp_rec(std::move(w), k, acc)) return std::nullopt;
  return acc;
}

GreedyBound greedy_bounds(const SimpleGraph& g, BoundKind kind,
                          int stop_after) {
  GreedyBound out;
  std::vector<char> used(g.n(), 0);
  if (kind == BoundKind::matching) {
    for (auto [a, b] : g.edges) {
      if (used[a] || used[b]) continue;
      used[a] = used[b] = 1;
      ++out.count;
      out.groups.push_back({g.vertices[a], g.vertices[b]});
      if (stop_after > 0 && out.count >= stop_after) break;
    }
  } else {
    for (int a = 0; a < g.n() && !(stop_after > 0 && out.count >= stop_after);
         ++a) {
      if (used[a]) continue;
      for (int b : g.adj[a]) {
        if (b <= a || used[b] || used[a]) continue;
        for (int c : g.adj[a]) {
          if (c <= b || used[c]) continue;
          if (!g.has_edge(b, c)) continue;
          used[a] = used[b] = used[c] = 1;
          ++out.count;
          out.groups.push_back({g.vertices[a], g.vertices[b], g.vertices[c]});
          break;
        }
        if (used[a]) break;
      }
    }
  }
  return out;
}

std::vector<PackedCycle> greedy_cycle_packing(const Multigraph& g,
                                              int stop_after) {
  Work w(g);
  std::vector<PackedCycle> out;
  int n = g.n();
  while (!(stop_after > 0 && static_cast<int>(out.size()) >= stop_after)) {
    std::vector<int> pick;
    for (int v = 0; v < n && pick.empty(); ++v)
      if (w.valive[v] && w.loops[v] > 0) pick = {v};
    if (pick.empty()) {
      for (int v = 0; v < n && pick.empty(); ++v) {
        if (!w.valive[v]) continue;
        for (int u : w.simple_adj(v))
          if (u > v && w.parallel_count(v, u) >= 2) {
            pick = {v, u};
            break;
          }
      }
    }
    if (pick.empty()) {
      pick = find_cycle(w);
      if (pick.empty()) break;
      // rotate so the smallest vertex leads (deterministic output)
      auto mn = std::min_element(pick.begin(), pick.end());
      std::rotate(pick.begin(), mn, pick.end());
    }
    out.push_back(make_cycle(w, pick));
    for (int v : pick) w.kill_vertex(v);
  }
  return out;
}

// ---------------------------------------------------------------------------
// exhaustive oracles
// ---------------------------------------------------------------------------

namespace {

constexpr int kOracleMaxN = 40;
constexpr int kOracleMaxPathK = 6;

void guard_n(int n) {
  if (n > kOracleMaxN)
    throw Error(ErrorCode::oracle_guard,
                "oracle: instance has " + std::to_string(n) +
                    " vertices (guard " + std::to_string(kOracleMaxN) + ")");
}

struct PathOracle {
  const SimpleGraph& g;
  int k;
  PathMode mode;
  std::vector<char> used;
  std::vector<int> path;

  bool dfs(int start) {
    if (static_cast<int>(path.size()) == k) {
      return mode == PathMode::path || g.has_edge(path.back(), start);
    }
    for (int w : g.adj[path.back()]) {
      if (used[w]) continue;
      if (mode == PathMode::cycle && w < start) continue;
      used[w] = 1;
      path.push_back(w);
      if (dfs(start)) return true;
      path.pop_back();
      used[w] = 0;
    }
    return false;
  }

  std::optional<std::vector<int>> run() {
    used.assign(g.n(), 0);
    for (int s = 0; s < g.n(); ++s) {
      std::fill(used.begin(), used.end(), 0);
      path.assign(1, s);
      used[s] = 1;
      if (dfs(s)) return path;
    }
    return std::nullopt;
  }
};

// Lexicographic combinations of size `size` over 0..pool-1.
template <typename F>
bool for_each_combination(int pool, int size, F&& accept) {
  std::vector<int> c(size);
  std::iota(c.begin(), c.end(), 0);
  if (size > pool) return false;
  while (true) {
    if (accept(c)) return true;
    int i = size - 1;
    while (i >= 0 && c[i] == pool - size + i) --i;
    if (i < 0) return false;
    ++c[i];
    for (int j = i + 1; j < size; ++j) c[j] = c[j - 1] + 1;
  }
}

OracleResult oracle_subset_cover(const std::vector<std::uint64_t>& constraints,
                                 const std::vector<int>& pool_to_vertex,
                                 const SimpleGraph& g, int k) {
  OracleResult res;
  int pool = static_cast<int>(pool_to_vertex.size());
  for (int size = 0; size <= std::min(k, pool); ++size) {
    std::vector<int> hit;
    bool found = for_each_combination(pool, size, [&](const std::vector<int>& c) {
      std::uint64_t mask = 0;
      for (int i : c) mask |= 1ull << pool_to_vertex[i];
      for (std::uint64_t m : constraints)
        if (!(m & mask)) return false;
      hit.assign(c.begin(), c.end());
      return true;
    });
    if (found) {
      res.yes = true;
      std::vector<VertexId> ids;
      for (int i : hit) ids.push_back(g.vertices[pool_to_vertex[i]]);
      res.witness.push_back(std::move(ids));
      return res;
    }
  }
  return res;
}

Multigraph to_multigraph(const SimpleGraph& g) {
  Multigraph mg;
  mg.vertices = g.vertices;
  for (auto [a, b] : g.edges) mg.edges.push_back({a, b, {}});
  mg.finish();
  return mg;
}

bool acyclic_without(const Multigraph& g, std::uint64_t removed) {
  std::vector<int> dsu(g.n());
  std::iota(dsu.begin(), dsu.end(), 0);
  std::function<int(int)> find = [&](int x) {
    while (dsu[x] != x) x = dsu[x] = dsu[dsu[x]];
    return x;
  };
  for (const auto& e : g.edges) {
    if ((removed >> e.a) & 1 || (removed >> e.b) & 1) continue;
    if (e.a == e.b) return false;
    int ra = find(e.a), rb = find(e.b);
    if (ra == rb) return false;
    dsu[ra] = rb;
  }
  return true;
}

OracleResult oracle_fvs_multi(const Multigraph& g, int k) {
  guard_n(g.n());
  OracleResult res;
  // candidates: the 2-core (cycles survive iterated degree-<=1 peeling)
  std::vector<int> deg(g.n(), 0);
  std::vector<char> alive(g.n(), 1);
  for (const auto& e : g.edges) {
    deg[e.a] += 1 + (e.a == e.b);
    if (e.b != e.a) deg[e.b]++;
  }
  bool changed = true;
  while (changed) {
    changed = false;
    for (int v = 0; v < g.n(); ++v)
      if (alive[v] && deg[v] <= 1) {
        alive[v] = 0;
        changed = true;
        for (int e : g.incident[v]) {
          const auto& me = g.edges[e];
          int o = me.a == v ? me.b : me.a;
          if (o != v && alive[o]) deg[o]--;
        }
        deg[v] = 0;
      }
  }
  std::vector<int> pool;
  for (int v = 0; v < g.n(); ++v)
    if (alive[v]) pool.push_back(v);

  for (int size = 0; size <= std::min<int>(k, pool.size()); ++size) {
    std::vector<int> hit;
    bool found = for_each_combination(
        static_cast<int>(pool.size()), size, [&](const std::vector<int>& c) {
          std::uint64_t mask = 0;
          for (int i : c) mask |= 1ull << pool[i];
          if (!acyclic_without(g, mask)) return false;
          hit.assign(c.begin(), c.end());
          return true;
        });
    if (found) {
      res.yes = true;
      std::vector<VertexId> ids;
      for (int i : hit) ids.push_back(g.vertices[pool[i]]);
      res.witness.push_back(std::move(ids));
      return res;
    }
  }
  return res;
}

// Every chordless cycle (loops, parallel pairs, induced cycles) with its
// vertex mask, sorted by minimum vertex.
struct OracleCycle {
  std::vector<int> verts;
  std::uint64_t mask = 0;
};

std::vector<OracleCycle> all_chordless(const Multigraph& g) {
  std::vector<OracleCycle> out;
  std::vector<std::vector<int>> adj(g.n());
  std::vector<std::vector<int>> par(g.n());
  for (const auto& e : g.edges) {
    if (e.a == e.b) continue;
    adj[e.a].push_back(e.b);
    adj[e.b].push_back(e.a);
  }
  for (auto& row : adj) {
    std::sort(row.begin(), row.end());
    row.erase(std::unique(row.begin(), row.end()), row.end());
  }
  auto adjacent = [&](int a, int b) {
    return std::binary_search(adj[a].begin(), adj[a].end(), b);
  };
  std::vector<char> has_loop(g.n(), 0);
  for (const auto& e : g.edges)
    if (e.a == e.b) has_loop[e.a] = 1;

  for (int v = 0; v < g.n(); ++v)
    if (has_loop[v]) out.push_back({{v}, 1ull << v});

  for (int v = 0; v < g.n(); ++v)
    for (int u : adj[v]) {
      if (u <= v) continue;
      int cnt = 0;
      for (const auto& e : g.edges)
        if ((e.a == v && e.b == u) || (e.a == u && e.b == v)) ++cnt;
      if (cnt >= 2)
        out.push_back({{v, u}, (1ull << v) | (1ull << u)});
    }

  // induced cycles of length >= 3, anchored at their minimum vertex
  std::vector<int> path;
  std::vector<char> on_path(g.n(), 0);
  std::function<void(int, int)> extend = [&](int anchor, int last) {
    for (int u : adj[last]) {
      if (u <= anchor || on_path[u]) continue;
      bool chord = false;
      for (std::size_t i = 1; i + 1 < path.size() && !chord; ++i)
        if (adjacent(u, path[i])) chord = true;
      if (chord) continue;
      if (path.size() >= 2 && adjacent(u, anchor)) {
        if (path[1] < u) {
          OracleCycle c;
          c.verts = path;
          c.verts.push_back(u);
          for (int x : c.verts) c.mask |= 1ull << x;
          out.push_back(std::move(c));
        }
        continue;
      }
      on_path[u] = 1;
      path.push_back(u);
      extend(anchor, u);
      path.pop_back();
      on_path[u] = 0;
    }
  };
  for (int v = 0; v < g.n(); ++v) {
    path.assign(1, v);
    on_path.assign(g.n(), 0);
    on_path[v] = 1;
    extend(v, v);
  }

  std::sort(out.begin(), out.end(), [](const OracleCycle& a, const OracleCycle& b) {
    if (a.verts[0] != b.verts[0]) return a.verts[0] < b.verts[0];
    if (a.verts.size() != b.verts.size()) return a.verts.size() < b.verts.size();
    return a.verts < b.verts;
  });
  return out;
}

bool cp_family_search(const std::vector<OracleCycle>& cycles, std::size_t from,
                      std::uint64_t used, int k,
                      std::vector<const OracleCycle*>& acc) {
  if (k == 0) return true;
  for (std::size_t i = from; i < cycles.size(); ++i) {
    if (cycles[i].mask & used) continue;
    // disjoint cycles have distinct minimum vertices; enforce ascending order
    if (!acc.empty() && cycles[i].verts[0] <= acc.back()->verts[0]) continue;
    acc.push_back(&cycles[i]);
    if (cp_family_search(cycles, i + 1, used | cycles[i].mask, k - 1, acc))
      return true;
    acc.pop_back();
  }
  return false;
}

OracleResult oracle_cp_multi(const Multigraph& g, int k) {
  guard_n(g.n());
  OracleResult res;
  auto cycles = all_chordless(g);
  std::vector<const OracleCycle*> acc;
  if (!cp_family_search(cycles, 0, 0, k, acc)) return res;
  res.yes = true;
  for (const auto* c : acc) {
    std::vector<VertexId> ids;
    for (int v : c->verts) ids.push_back(g.vertices[v]);
    res.witness.push_back(std::move(ids));
  }
  return res;
}

}  // namespace

OracleResult oracle_solve(Problem p, const SimpleGraph& g, int k,
                          PathMode mode) {
  switch (p) {
    case Problem::path: {
      if (k > kOracleMaxPathK || k < 1)
        throw Error(ErrorCode::oracle_guard, "oracle: path k out of range");
      OracleResult res;
      if (k > g.n()) return res;
      PathOracle po{g, k, mode, {}, {}};
      if (auto r = po.run()) {
        res.yes = true;
        res.witness.push_back(to_ids(g, *r));
      }
      return res;
    }
    case Problem::vc: {
      guard_n(g.n());
      std::vector<std::uint64_t> cons;
      std::vector<char> relevant(g.n(), 0);
      for (auto [a, b] : g.edges) {
        cons.push_back((1ull << a) | (1ull << b));
        relevant[a] = relevant[b] = 1;
      }
      std::vector<int> pool;
      for (int v = 0; v < g.n(); ++v)
        if (relevant[v]) pool.push_back(v);
      return oracle_subset_cover(cons, pool, g, k);
    }
    case Problem::ths: {
      guard_n(g.n());
      std::vector<std::uint64_t> cons;
      std::vector<char> relevant(g.n(), 0);
      for (auto [a, b] : g.edges)
        for (int c : g.adj[a]) {
          if (c <= b) continue;
          if (!g.has_edge(b, c)) continue;
          cons.push_back((1ull << a) | (1ull << b) | (1ull << c));
          relevant[a] = relevant[b] = relevant[c] = 1;
        }
      std::vector<int> pool;
      for (int v = 0; v < g.n(); ++v)
        if (relevant[v]) pool.push_back(v);
      return oracle_subset_cover(cons, pool, g, k);
    }
    case Problem::fvs:
      return oracle_fvs_multi(to_multigraph(g), k);
    case Problem::cp:
      return oracle_cp_multi(to_multigraph(g), k);
  }
  throw Error(ErrorCode::bad_parameter, "oracle: unknown problem");
}

OracleResult oracle_solve(Problem p, const Multigraph& g, int k) {
  if (p == Problem::fvs) return oracle_fvs_multi(g, k);
  if (p == Problem::cp) return oracle_cp_multi(g, k);
  throw Error(ErrorCode::bad_parameter,
              "oracle: multigraph instances are fvs/cp only");
}

}  // namespace udg::solvers
