#include "udg/shell_skeleton.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <sstream>
#include <stdexcept>

#include "udg/error.hpp"
#include "udg/kernel_solvers.hpp"

namespace udg {

namespace {

std::pair<VertexId, VertexId> norm_pair(VertexId a, VertexId b) {
  return a <= b ? std::pair{a, b} : std::pair{b, a};
}

}  // namespace

ShellState::ShellState(const GridIndex& grid, const CoreCluster& core)
    : grid_(&grid), core_(&core) {}

bool ShellState::compute_boundary(VertexId v) const {
  for (VertexId u : grid_->neighbors_of(v))
    if (core_->contains_cell(grid_->cell_of_vertex(u))) return true;
  return false;
}

int ShellState::eff_degree(VertexId v) const {
  int eff = 0;
  for (EdgeId e : m_.at(v).edges) {
    const Edge& ed = edges_.at(e);
    eff += (ed.u == v) + (ed.v == v);
  }
  return eff;
}

EdgeId ShellState::add_edge(VertexId u, VertexId v, bool contracted) {
  auto [a, b] = norm_pair(u, v);
  EdgeId id = next_edge_++;
  edges_.emplace(id, Edge{a, b, contracted});
  m_.at(a).edges.push_back(id);
  if (b != a) m_.at(b).edges.push_back(id);
  return id;
}

void ShellState::remove_edge(EdgeId e) {
  if (edge_tree_rep_.count(e))
    throw std::logic_error("remove_edge: backing tree still attached");
  Edge ed = edges_.at(e);
  auto detach = [&](VertexId x) {
    auto& list = m_.at(x).edges;
    list.erase(std::find(list.begin(), list.end(), e));
  };
  detach(ed.u);
  if (ed.v != ed.u) detach(ed.v);
  if (ed.u == ed.v && m_.at(ed.u).anchor) {
    // the anchor's defining loop is gone
    m_.at(ed.u).anchor = false;
    clean_queue_.insert(ed.u);
  }
  edges_.erase(e);
}

ShellState::TreeRec ShellState::take_rec(VertexId any_tree_vertex) {
  NodeId r = forest_.root(node(any_tree_vertex));
  auto it = tree_recs_.find(r);
  if (it == tree_recs_.end()) return {};
  TreeRec rec = std::move(it->second);
  tree_recs_.erase(it);
  for (const Bridge& b : rec.bridges) {
    auto& list = bridges_at_m_[b.m_v];
    list.erase(std::find(list.begin(), list.end(), b.tree_v));
    if (list.empty()) bridges_at_m_.erase(b.m_v);
  }
  if (rec.m_edge) edge_tree_rep_.erase(*rec.m_edge);
  return rec;
}

void ShellState::put_rec(VertexId any_tree_vertex, TreeRec rec) {
  if (rec.bridges.size() > 2)
    throw std::logic_error("put_rec: more than two bridges on a tree");
  if (rec.m_edge.has_value() != (rec.bridges.size() == 2))
    throw std::logic_error("put_rec: contracted edge iff two bridges");
  if (rec.bridges.empty()) return;
  std::sort(rec.bridges.begin(), rec.bridges.end(),
            [](const Bridge& a, const Bridge& b) {
              return std::pair{a.tree_v, a.m_v} < std::pair{b.tree_v, b.m_v};
            });
  NodeId r = forest_.root(node(any_tree_vertex));
  for (const Bridge& b : rec.bridges) bridges_at_m_[b.m_v].push_back(b.tree_v);
  if (rec.m_edge) edge_tree_rep_[*rec.m_edge] = rec.bridges[0].tree_v;
  tree_recs_.emplace(r, std::move(rec));
}

void ShellState::forest_add(VertexId v) {
  NodeId n = forest_.make_node();
  node_of_.emplace(v, n);
  vertex_of_.emplace(n, v);
}

void ShellState::forest_remove(VertexId v) {
  NodeId n = node(v);
  forest_.discard_node(n);
  vertex_of_.erase(n);
  node_of_.erase(v);
  tree_adj_.erase(v);
}

void ShellState::forest_link(VertexId a, VertexId b) {
  forest_.evert(node(b));
  forest_.link(node(a), node(b));
  tree_adj_[a].push_back(b);
  tree_adj_[b].push_back(a);
}

std::vector<VertexId> ShellState::forest_cut_all(VertexId v) {
  std::vector<VertexId> nbrs;
  auto it = tree_adj_.find(v);
  if (it != tree_adj_.end()) nbrs = it->second;
  if (!nbrs.empty()) {
    forest_.evert(node(v));
    for (VertexId x : nbrs) {
      forest_.cut(node(x));
      auto& list = tree_adj_[x];
      list.erase(std::find(list.begin(), list.end(), v));
    }
  }
  tree_adj_.erase(v);
  std::sort(nbrs.begin(), nbrs.end());
  return nbrs;
}

// ---------------------------------------------------------------------------
// push
// ---------------------------------------------------------------------------

void ShellState::push_vertex(VertexId v) {
  MVertex mv;
  mv.special = true;
  mv.boundary = compute_boundary(v);
  m_.emplace(v, std::move(mv));
  specials_.insert(v);

  std::vector<VertexId> m_side, t_side;
  for (VertexId u : grid_->neighbors_of(v)) {
    if (in_m(u))
      m_side.push_back(u);
    else if (in_forest(u))
      t_side.push_back(u);
  }
  for (VertexId u : m_side) add_edge(v, u, false);
  for (VertexId u : t_side) {
    // an earlier tree edge may have promoted u into M meanwhile
    if (in_m(u))
      add_edge(v, u, false);
    else
      push_tree_edge(v, u);
  }
}

void ShellState::push_tree_edge(VertexId v, VertexId u) {
  TreeRec rec = take_rec(u);
  if (rec.bridges.empty()) {
    rec.bridges.push_back({u, v});
    put_rec(u, rec);
    return;
  }
  if (rec.bridges.size() == 1) {
    Bridge tt = rec.bridges[0];
    EdgeId e = add_edge(v, tt.m_v, true);
    rec.bridges.push_back({u, v});
    rec.m_edge = e;
    put_rec(u, rec);
    return;
  }

  // two bridges: the tree already backs a contracted edge which the new
  // attachment splits at p, the branching point of t, s seen from u
  Bridge bt = rec.bridges[0], bs = rec.bridges[1];
  clean_queue_.insert(edges_.at(*rec.m_edge).u);
  clean_queue_.insert(edges_.at(*rec.m_edge).v);
  remove_edge(*rec.m_edge);

  forest_.evert(node(u));
  NodeId pn = forest_.lca(node(bt.tree_v), node(bs.tree_v));
  VertexId p = vertex_of_.at(pn);

  std::vector<VertexId> parts = forest_cut_all(p);
  forest_remove(p);
  MVertex pv;
  pv.boundary = compute_boundary(p);
  m_.emplace(p, std::move(pv));

  std::vector<char> part_used(parts.size(), 0);
  attach_side(p, bt.tree_v, bt.m_v, parts, part_used);
  attach_side(p, bs.tree_v, bs.m_v, parts, part_used);
  attach_side(p, u, v, parts, part_used);
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (part_used[i]) continue;
    TreeRec nr;
    nr.bridges.push_back({parts[i], p});
    put_rec(parts[i], nr);
  }
}

void ShellState::attach_side(VertexId p, VertexId t, VertexId m,
                             const std::vector<VertexId>& parts,
                             std::vector<char>& part_used) {
  if (t == p) {
    add_edge(p, m, false);
    return;
  }
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (part_used[i]) continue;
    if (!forest_.connected(node(t), node(parts[i]))) continue;
    part_used[i] = 1;
    EdgeId e = add_edge(p, m, true);
    TreeRec nr;
    nr.bridges.push_back({t, m});
    nr.bridges.push_back({parts[i], p});
    nr.m_edge = e;
    put_rec(parts[i], nr);
    return;
  }
  throw std::logic_error("attach_side: endpoint not found in any component");
}

// ---------------------------------------------------------------------------
// pop
// ---------------------------------------------------------------------------

void ShellState::pop_vertex(VertexId v) {
  if (in_m(v))
    pop_m_vertex(v);
  else if (in_forest(v))
    pop_tree_vertex(v);
  else
    throw Error(ErrorCode::unknown_vertex, "pop: vertex not in the shell");
}

void ShellState::pop_m_vertex(VertexId v) {
  std::vector<EdgeId> eids = m_.at(v).edges;
  // contracted edges first: strip their trees' bridges at v
  for (EdgeId e : eids) {
    Edge ed = edges_.at(e);
    if (!ed.contracted) continue;
    VertexId other = ed.u == v ? ed.v : ed.u;
    VertexId rep = edge_tree_rep_.at(e);
    TreeRec rec = take_rec(rep);
    rec.m_edge.reset();
    std::erase_if(rec.bridges, [&](const Bridge& b) { return b.m_v == v; });
    remove_edge(e);
    put_rec(rep, rec);
    if (other != v) clean_queue_.insert(other);
  }
  for (EdgeId e : eids) {
    if (!edges_.count(e)) continue;
    Edge ed = edges_.at(e);
    if (ed.contracted) continue;
    VertexId other = ed.u == v ? ed.v : ed.u;
    remove_edge(e);
    if (other != v) clean_queue_.insert(other);
  }
  // leftover bridges into v come from pendant trees
  auto pit = bridges_at_m_.find(v);
  std::vector<VertexId> pendants =
      pit == bridges_at_m_.end() ? std::vector<VertexId>{} : pit->second;
  for (VertexId x : pendants) {
    TreeRec rec = take_rec(x);
    std::erase_if(rec.bridges, [&](const Bridge& b) { return b.m_v == v; });
    put_rec(x, rec);
  }
  m_.erase(v);
  specials_.erase(v);
  clean_queue_.erase(v);
}

void ShellState::pop_tree_vertex(VertexId v) {
  TreeRec rec = take_rec(v);
  bool on_path = false;
  if (rec.bridges.size() == 2) {
    forest_.evert(node(v));
    NodeId l =
        forest_.lca(node(rec.bridges[0].tree_v), node(rec.bridges[1].tree_v));
    on_path = (l == node(v));
  }
  if (rec.m_edge && on_path) {
    Edge ed = edges_.at(*rec.m_edge);
    clean_queue_.insert(ed.u);
    clean_queue_.insert(ed.v);
    EdgeId dead = *rec.m_edge;
    rec.m_edge.reset();
    remove_edge(dead);
  }
  std::erase_if(rec.bridges, [&](const Bridge& b) { return b.tree_v == v; });

  std::vector<VertexId> parts = forest_cut_all(v);
  forest_remove(v);
  for (VertexId x : parts) {
    TreeRec nr;
    for (const Bridge& b : rec.bridges)
      if (forest_.connected(node(b.tree_v), node(x))) nr.bridges.push_back(b);
    if (nr.bridges.size() == 2) nr.m_edge = rec.m_edge;
    put_rec(x, nr);
  }
}

// ---------------------------------------------------------------------------
// cleaning
// ---------------------------------------------------------------------------

void ShellState::clean() {
  std::set<VertexId> work = std::move(clean_queue_);
  clean_queue_.clear();
  for (VertexId v : specials_) {
    if (in_m(v)) m_.at(v).special = false;
    work.insert(v);
  }
  specials_.clear();

  while (!work.empty() || !clean_queue_.empty()) {
    work.insert(clean_queue_.begin(), clean_queue_.end());
    clean_queue_.clear();
    VertexId v = *work.begin();
    work.erase(work.begin());
    if (!in_m(v)) continue;
    MVertex& mv = m_.at(v);
    if (mv.boundary || mv.anchor) continue;
    int eff = eff_degree(v);
    if (eff >= 3) continue;
    if (mv.edges.size() == 1) {
      const Edge& ed = edges_.at(mv.edges[0]);
      if (ed.u == ed.v) {
        // both connections return to v: keep it as the cycle's anchor
        mv.anchor = true;
        continue;
      }
    }
    demote(v, work);
  }
}

void ShellState::demote(VertexId v, std::set<VertexId>& work) {
  std::vector<EdgeId> eids = m_.at(v).edges;  // at most two, no loops here
  std::vector<Bridge> far;
  std::vector<VertexId> links;
  std::vector<VertexId> others;
  for (EdgeId e : eids) {
    Edge ed = edges_.at(e);
    VertexId other = ed.u == v ? ed.v : ed.u;
    others.push_back(other);
    if (!ed.contracted) {
      far.push_back({v, other});
      remove_edge(e);
    } else {
      TreeRec rec = take_rec(edge_tree_rep_.at(e));
      rec.m_edge.reset();
      Bridge at_v{}, at_other{};
      for (const Bridge& b : rec.bridges)
        (b.m_v == v ? at_v : at_other) = b;
      far.push_back(at_other);
      links.push_back(at_v.tree_v);
      remove_edge(e);
    }
  }
  // pendant trees hanging off v merge in through their bridges
  auto pit = bridges_at_m_.find(v);
  std::vector<VertexId> pendants =
      pit == bridges_at_m_.end() ? std::vector<VertexId>{} : pit->second;
  for (VertexId x : pendants) {
    TreeRec rec = take_rec(x);
    std::erase_if(rec.bridges, [&](const Bridge& b) { return b.m_v == v; });
    if (!rec.bridges.empty() || rec.m_edge)
      throw std::logic_error("demote: pendant tree had extra attachments");
    links.push_back(x);
  }

  m_.erase(v);
  forest_add(v);
  for (VertexId x : links) forest_link(v, x);

  TreeRec nr;
  nr.bridges = far;
  if (far.size() == 2) {
    nr.m_edge = add_edge(far[0].m_v, far[1].m_v, true);
  } else {
    for (VertexId w : others)
      if (in_m(w)) work.insert(w);  // lost an edge with no replacement
  }
  put_rec(v, nr);
}

// ---------------------------------------------------------------------------
// update orchestration
// ---------------------------------------------------------------------------

void ShellState::apply_update(const CoreCluster::Delta& delta, UpdateOp op,
                              VertexId v, Point p, CellId c) {
  std::set<VertexId> to_remove, to_add;
  for (VertexId u : delta.entered_core)
    if (in_shell(u)) to_remove.insert(u);
  if (op == UpdateOp::erase && in_shell(v)) to_remove.insert(v);
  for (VertexId u : delta.left_core)
    if (u != v) to_add.insert(u);
  if (op == UpdateOp::insert && !core_->contains_cell(c)) to_add.insert(v);

  std::set<VertexId> reprocess;
  auto mark_near = [&](Point q) {
    for (VertexId u : grid_->neighbors_of_point(q))
      if (in_shell(u)) reprocess.insert(u);
  };
  mark_near(p);
  for (VertexId u : delta.entered_core) mark_near(grid_->point_of(u));
  for (VertexId u : delta.left_core)
    if (u != v) mark_near(grid_->point_of(u));
  for (VertexId u : to_add) reprocess.erase(u);
  for (VertexId u : to_remove) reprocess.erase(u);

  std::set<VertexId> pops = to_remove;
  pops.insert(reprocess.begin(), reprocess.end());
  for (VertexId u : pops) pop_vertex(u);

  std::set<VertexId> pushes = to_add;
  pushes.insert(reprocess.begin(), reprocess.end());
  for (VertexId u : pushes) push_vertex(u);

  clean();
}

// ---------------------------------------------------------------------------
// queries
// ---------------------------------------------------------------------------

std::vector<VertexId> ShellState::tree_path(VertexId a, VertexId b) const {
  if (a == b) return {a};
  std::unordered_map<VertexId, VertexId> parent;
  std::deque<VertexId> q{a};
  parent.emplace(a, a);
  while (!q.empty()) {
    VertexId x = q.front();
    q.pop_front();
    if (x == b) break;
    auto it = tree_adj_.find(x);
    if (it == tree_adj_.end()) continue;
    for (VertexId y : it->second)
      if (!parent.count(y)) {
        parent.emplace(y, x);
        q.push_back(y);
      }
  }
  std::vector<VertexId> path;
  VertexId cur = b;
  while (true) {
    path.push_back(cur);
    if (cur == a) break;
    cur = parent.at(cur);
  }
  std::reverse(path.begin(), path.end());
  return path;
}

std::vector<VertexId> ShellState::expand_edge(EdgeId e) {
  const Edge& ed = edges_.at(e);
  if (!ed.contracted)
    throw Error(ErrorCode::bad_parameter, "expand_edge: edge is direct");
  VertexId rep = edge_tree_rep_.at(e);
  const TreeRec& rec = tree_recs_.at(forest_.root(node(rep)));
  Bridge b0 = rec.bridges[0], b1 = rec.bridges[1];  // sorted by put_rec
  Bridge first = b0, second = b1;
  if (first.m_v != ed.u) std::swap(first, second);
  std::vector<VertexId> out{ed.u};
  auto mid = tree_path(first.tree_v, second.tree_v);
  out.insert(out.end(), mid.begin(), mid.end());
  out.push_back(ed.v);
  return out;
}

Multigraph ShellState::glue_kernel() {
  Multigraph g;
  std::vector<VertexId> verts = core_->core_vertices();
  for (const auto& [v, mv] : m_) verts.push_back(v);
  std::sort(verts.begin(), verts.end());
  verts.erase(std::unique(verts.begin(), verts.end()), verts.end());
  g.vertices = verts;

  auto idx = [&](VertexId v) { return g.index_of(v); };

  for (VertexId u : core_->core_vertices())
    for (VertexId w : grid_->neighbors_of(u))
      if (w > u && core_->in_core(w)) g.edges.push_back({idx(u), idx(w), {}});
  std::vector<VertexId> msorted;
  for (const auto& [v, mv] : m_) msorted.push_back(v);
  std::sort(msorted.begin(), msorted.end());
  for (VertexId b : msorted) {
    if (!m_.at(b).boundary) continue;
    for (VertexId w : grid_->neighbors_of(b))
      if (core_->in_core(w)) {
        int x = idx(b), y = idx(w);
        if (x > y) std::swap(x, y);
        g.edges.push_back({x, y, {}});
      }
  }
  std::vector<EdgeId> eids;
  for (const auto& [e, ed] : edges_) eids.push_back(e);
  std::sort(eids.begin(), eids.end());
  for (EdgeId e : eids) {
    const Edge& ed = edges_.at(e);
    MultiEdge me{idx(ed.u), idx(ed.v), {}};
    if (ed.contracted) me.expansion = expand_edge(e);
    g.edges.push_back(std::move(me));
  }
  g.finish();
  return g;
}

namespace {

std::vector<VertexId> lift_cycle(const Multigraph& g,
                                 const solvers::PackedCycle& cyc) {
  std::vector<VertexId> out;
  int L = static_cast<int>(cyc.verts.size());
  for (int i = 0; i < L; ++i) {
    VertexId a = g.vertices[cyc.verts[i]];
    out.push_back(a);
    const MultiEdge& e = g.edges[cyc.edge_ids[i]];
    if (e.expansion.empty()) continue;
    std::vector<VertexId> path = e.expansion;
    if (path.front() != a) std::reverse(path.begin(), path.end());
    for (std::size_t j = 1; j + 1 < path.size(); ++j) out.push_back(path[j]);
  }
  return out;
}

}  // namespace

std::optional<std::vector<VertexId>> ShellState::query_fvs(int k) {
  if (k < 0) return std::nullopt;
  Multigraph g = glue_kernel();
  auto packing = solvers::greedy_cycle_packing(g, k + 1);
  if (static_cast<int>(packing.size()) > k) return std::nullopt;
  return solvers::solve_fvs(g, k);
}

std::optional<std::vector<std::vector<VertexId>>> ShellState::query_cp(int k) {
  if (k < 1)
    throw Error(ErrorCode::bad_parameter, "query_cp: k must be positive");
  Multigraph g = glue_kernel();
  auto packing = solvers::greedy_cycle_packing(g, k);
  std::vector<std::vector<VertexId>> out;
  if (static_cast<int>(packing.size()) >= k) {
    for (int i = 0; i < k; ++i) out.push_back(lift_cycle(g, packing[i]));
    return out;
  }
  auto sol = solvers::solve_cp(g, k);
  if (!sol) return std::nullopt;
  for (const auto& cyc : *sol) out.push_back(lift_cycle(g, cyc));
  return out;
}

ShellState::Stats ShellState::stats() {
  Stats s;
  s.m_vertices = m_.size();
  s.m_edges = edges_.size();
  std::set<NodeId> roots;
  for (const auto& [v, n] : node_of_) roots.insert(forest_.root(n));
  s.trees = roots.size();
  return s;
}

// ---------------------------------------------------------------------------
// scratch reference construction
// ---------------------------------------------------------------------------

ShellState ShellState::rebuild_from_scratch(const GridIndex& grid,
                                            const CoreCluster& core) {
  ShellState s(grid, core);

  std::vector<VertexId> shell;
  for (const auto& [v, pt] : grid.points())
    if (!core.contains_cell(cell_of(pt))) shell.push_back(v);
  std::sort(shell.begin(), shell.end());
  auto in_shell_set = [&](VertexId v) {
    return std::binary_search(shell.begin(), shell.end(), v);
  };

  std::unordered_map<VertexId, std::vector<VertexId>> adj;
  std::unordered_map<VertexId, bool> boundary;
  for (VertexId v : shell) {
    std::vector<VertexId> nbrs;
    bool bnd = false;
    for (VertexId u : grid.neighbors_of(v)) {
      if (in_shell_set(u))
        nbrs.push_back(u);
      else
        bnd = true;
    }
    adj.emplace(v, std::move(nbrs));
    boundary.emplace(v, bnd);
  }

  // peel ordinary degree-<=1 vertices
  std::set<VertexId> alive(shell.begin(), shell.end());
  std::unordered_map<VertexId, int> deg;
  for (VertexId v : shell) deg[v] = static_cast<int>(adj[v].size());
  std::deque<VertexId> queue(shell.begin(), shell.end());
  while (!queue.empty()) {
    VertexId v = queue.front();
    queue.pop_front();
    if (!alive.count(v) || boundary[v] || deg[v] > 1) continue;
    alive.erase(v);
    for (VertexId u : adj[v])
      if (alive.count(u)) {
        --deg[u];
        queue.push_back(u);
      }
  }
  auto deg_r = [&](VertexId v) {
    int d = 0;
    for (VertexId u : adj[v])
      if (alive.count(u)) ++d;
    return d;
  };

  std::set<VertexId> mset;
  for (VertexId v : shell)
    if (alive.count(v) && (boundary[v] || deg_r(v) >= 3)) mset.insert(v);

  struct Chain {
    VertexId a, b;
    std::vector<VertexId> interior;
    bool anchor_loop = false;
  };
  std::vector<Chain> chains;
  std::set<VertexId> interior;

  for (VertexId w : mset) {
    std::vector<VertexId> nbrs;
    for (VertexId x : adj[w])
      if (alive.count(x)) nbrs.push_back(x);
    std::sort(nbrs.begin(), nbrs.end());
    for (VertexId x : nbrs) {
      if (mset.count(x) || interior.count(x)) continue;
      Chain ch;
      ch.a = w;
      VertexId prev = w, cur = x;
      while (!mset.count(cur)) {
        interior.insert(cur);
        ch.interior.push_back(cur);
        VertexId next = cur;  // the lone live neighbor besides prev
        for (VertexId y : adj[cur])
          if (alive.count(y) && y != prev) next = y;
        prev = cur;
        cur = next;
      }
      ch.b = cur;
      chains.push_back(std::move(ch));
    }
  }
  // untouched ordinary cycles: keep their minimum vertex as an anchor
  for (VertexId v : shell) {
    if (!alive.count(v) || mset.count(v) || interior.count(v)) continue;
    std::vector<VertexId> live;
    for (VertexId y : adj[v])
      if (alive.count(y)) live.push_back(y);
    std::sort(live.begin(), live.end());
    Chain ch;
    ch.a = ch.b = v;
    ch.anchor_loop = true;
    VertexId prev = v, cur = live[0];
    while (cur != v) {
      interior.insert(cur);
      ch.interior.push_back(cur);
      VertexId next = prev;
      for (VertexId y : adj[cur])
        if (alive.count(y) && y != prev) next = y;
      prev = cur;
      cur = next;
    }
    mset.insert(v);
    chains.push_back(std::move(ch));
  }

  for (VertexId v : mset) {
    MVertex mv;
    mv.boundary = boundary[v];
    s.m_.emplace(v, std::move(mv));
  }
  for (auto& ch : chains)
    if (ch.anchor_loop) s.m_.at(ch.a).anchor = true;

  // direct skeleton edges
  for (VertexId v : mset)
    for (VertexId u : adj[v])
      if (u > v && mset.count(u)) s.add_edge(v, u, false);

  // the contracted forest: shell minus V(M), linked along its shell edges
  for (VertexId v : shell)
    if (!mset.count(v)) s.forest_add(v);
  for (VertexId v : shell) {
    if (mset.count(v)) continue;
    for (VertexId u : adj[v])
      if (u > v && !mset.count(u)) s.forest_link(v, u);
  }

  // bridges per component, plus the contracted edge of two-bridge trees
  std::map<NodeId, TreeRec> recs;
  for (VertexId v : shell) {
    if (mset.count(v)) continue;
    for (VertexId u : adj[v])
      if (mset.count(u))
        recs[s.forest_.root(s.node(v))].bridges.push_back({v, u});
  }
  for (auto& ch : chains) {
    EdgeId e = s.add_edge(ch.a, ch.b, true);
    NodeId r = s.forest_.root(s.node(ch.interior.front()));
    recs.at(r).m_edge = e;
  }
  for (auto& [root, rec] : recs) {
    if (rec.bridges.size() > 2)
      throw std::logic_error("scratch: tree with more than two bridges");
    s.put_rec(s.vertex_of_.at(root), std::move(rec));
  }
  return s;
}

// ---------------------------------------------------------------------------
// canonical form
// ---------------------------------------------------------------------------

namespace {

struct Model {
  std::map<VertexId, bool> mverts;  // id -> boundary
  struct ME {
    VertexId u, v;
    bool contracted;
    std::vector<VertexId> path;  // endpoints included; loops closed
  };
  std::vector<ME> medges;
  struct MT {
    std::set<VertexId> verts;
    std::set<std::pair<VertexId, VertexId>> edges;
    std::set<std::pair<VertexId, VertexId>> bridges;  // (tree_v, m_v)
  };
  std::vector<MT> trees;
};

// An anchor is only a representative choice for its all-ordinary cycle, so
// incremental and scratch states may disagree on which cycle vertex carries
// the loop. Re-root every pure loop vertex at the minimum id of its cycle:
// absorb the trees hanging off the old anchor, then split the merged
// component at the new one.
void normalize_anchors(Model& m) {
  std::vector<VertexId> candidates;
  for (const auto& [v, bnd] : m.mverts)
    if (!bnd) candidates.push_back(v);
  for (VertexId a : candidates) {
    int incid = 0;
    Model::ME* loop = nullptr;
    for (auto& e : m.medges) {
      incid += (e.u == a) + (e.v == a);
      if (e.u == a && e.v == a) loop = &e;
    }
    if (incid != 2 || !loop || !loop->contracted) continue;
    std::vector<VertexId> cyc(loop->path.begin(), loop->path.end() - 1);
    VertexId mn = *std::min_element(cyc.begin(), cyc.end());
    if (mn == a) continue;

    // merge the backing tree, the old anchor, and every tree bridged to it
    std::set<VertexId> verts{a};
    std::set<std::pair<VertexId, VertexId>> edges;
    std::vector<Model::MT> rest;
    for (auto& t : m.trees) {
      bool absorb = t.verts.count(cyc[1]) != 0;
      for (auto [tv, mv] : t.bridges)
        if (mv == a) absorb = true;
      if (!absorb) {
        rest.push_back(std::move(t));
        continue;
      }
      verts.insert(t.verts.begin(), t.verts.end());
      edges.insert(t.edges.begin(), t.edges.end());
      for (auto [tv, mv] : t.bridges) {
        if (mv != a)
          throw std::logic_error("canonical: absorbed tree bridged elsewhere");
        edges.insert(norm_pair(tv, a));
      }
    }
    m.trees = std::move(rest);

    // split the merged component at the new anchor
    std::size_t L = cyc.size();
    std::size_t mi = std::find(cyc.begin(), cyc.end(), mn) - cyc.begin();
    m.mverts.erase(a);
    m.mverts.emplace(mn, false);
    verts.erase(mn);
    std::map<VertexId, std::vector<VertexId>> adj;
    std::vector<VertexId> at_new_anchor;
    for (auto [x, y] : edges) {
      if (x == mn || y == mn) {
        at_new_anchor.push_back(x == mn ? y : x);
        continue;
      }
      adj[x].push_back(y);
      adj[y].push_back(x);
    }
    std::set<VertexId> seen;
    for (VertexId start : verts) {
      if (seen.count(start)) continue;
      Model::MT piece;
      std::deque<VertexId> q{start};
      seen.insert(start);
      while (!q.empty()) {
        VertexId x = q.front();
        q.pop_front();
        piece.verts.insert(x);
        for (VertexId y : adj[x]) {
          piece.edges.insert(norm_pair(x, y));
          if (!seen.count(y)) {
            seen.insert(y);
            q.push_back(y);
          }
        }
      }
      for (VertexId x : at_new_anchor)
        if (piece.verts.count(x)) piece.bridges.insert({x, mn});
      m.trees.push_back(std::move(piece));
    }

    loop->u = loop->v = mn;
    std::vector<VertexId> rot;
    for (std::size_t i = 0; i < L; ++i) rot.push_back(cyc[(mi + i) % L]);
    rot.push_back(mn);
    loop->path = std::move(rot);
  }
}

std::string serialize(const Model& m) {
  std::vector<std::string> lines;
  for (const auto& [v, bnd] : m.mverts) {
    std::ostringstream os;
    os << "V " << v << (bnd ? " B" : " -");
    lines.push_back(os.str());
  }
  for (const auto& e : m.medges) {
    std::ostringstream os;
    if (!e.contracted) {
      auto [a, b] = norm_pair(e.u, e.v);
      os << "E D " << a << " " << b;
    } else {
      std::vector<VertexId> fwd = e.path;
      std::vector<VertexId> rev(fwd.rbegin(), fwd.rend());
      if (e.u == e.v) {
        // closed walk: compare the two directions around the cycle
        std::vector<VertexId> alt{fwd.front()};
        alt.insert(alt.end(), fwd.rbegin() + 1, fwd.rend() - 1);
        alt.push_back(fwd.front());
        if (alt < fwd) fwd = alt;
      } else if (rev < fwd) {
        fwd = rev;
      }
      os << "E C";
      for (VertexId x : fwd) os << " " << x;
    }
    lines.push_back(os.str());
  }
  for (const auto& t : m.trees) {
    std::ostringstream os;
    os << "T V";
    for (VertexId v : t.verts) os << " " << v;
    os << " E";
    for (auto [a, b] : t.edges) os << " " << a << "-" << b;
    os << " B";
    for (auto [tv, mv] : t.bridges) os << " " << tv << ">" << mv;
    lines.push_back(os.str());
  }
  std::sort(lines.begin(), lines.end());
  std::string out;
  for (const auto& l : lines) {
    out += l;
    out += '\n';
  }
  return out;
}

}  // namespace

std::string ShellState::canonical_form() {
  Model model;
  for (const auto& [v, mv] : m_) {
    if (mv.special)
      throw std::logic_error("canonical_form: special flag after cleaning");
    model.mverts.emplace(v, mv.boundary);
  }
  std::vector<EdgeId> eids;
  for (const auto& [e, ed] : edges_) eids.push_back(e);
  std::sort(eids.begin(), eids.end());
  for (EdgeId e : eids) {
    const Edge& ed = edges_.at(e);
    Model::ME me{ed.u, ed.v, ed.contracted, {}};
    if (ed.contracted) me.path = expand_edge(e);
    model.medges.push_back(std::move(me));
  }
  std::set<VertexId> seen;
  std::vector<VertexId> forest_verts;
  for (const auto& [v, n] : node_of_) forest_verts.push_back(v);
  std::sort(forest_verts.begin(), forest_verts.end());
  for (VertexId v : forest_verts) {
    if (seen.count(v)) continue;
    Model::MT t;
    std::deque<VertexId> q{v};
    seen.insert(v);
    while (!q.empty()) {
      VertexId x = q.front();
      q.pop_front();
      t.verts.insert(x);
      auto it = tree_adj_.find(x);
      if (it == tree_adj_.end()) continue;
      for (VertexId y : it->second) {
        t.edges.insert(norm_pair(x, y));
        if (!seen.count(y)) {
          seen.insert(y);
          q.push_back(y);
        }
      }
    }
    auto rit = tree_recs_.find(forest_.root(node(v)));
    if (rit != tree_recs_.end())
      for (const Bridge& b : rit->second.bridges)
        t.bridges.insert({b.tree_v, b.m_v});
    model.trees.push_back(std::move(t));
  }
  normalize_anchors(model);
  return serialize(model);
}

// ---------------------------------------------------------------------------
// invariants
// ---------------------------------------------------------------------------

void ShellState::check_invariants() {
  if (!specials_.empty())
    throw std::logic_error("shell: specials outside an update");

  for (const auto& [v, pt] : grid_->points()) {
    int where = (core_->contains_cell(cell_of(pt)) ? 1 : 0) +
                (in_m(v) ? 1 : 0) + (in_forest(v) ? 1 : 0);
    if (where != 1)
      throw std::logic_error("shell: vertex not in exactly one of core/M/T");
  }

  for (const auto& [v, mv] : m_) {
    if (mv.boundary != compute_boundary(v))
      throw std::logic_error("shell: stale boundary flag");
    for (EdgeId e : mv.edges) {
      const Edge& ed = edges_.at(e);
      if (ed.u != v && ed.v != v)
        throw std::logic_error("shell: incidence list broken");
    }
    if (!mv.boundary && !mv.anchor && eff_degree(v) < 3)
      throw std::logic_error("shell: contractible vertex survived cleaning");
    if (mv.anchor) {
      bool loop = false;
      for (EdgeId e : mv.edges)
        if (edges_.at(e).u == edges_.at(e).v) loop = true;
      if (!loop) throw std::logic_error("shell: anchor without its loop");
    }
  }
  for (const auto& [e, ed] : edges_) {
    if (!in_m(ed.u) || !in_m(ed.v))
      throw std::logic_error("shell: edge endpoint missing from M");
    if (ed.contracted && !edge_tree_rep_.count(e))
      throw std::logic_error("shell: contracted edge without backing tree");
  }

  std::size_t rec_bridges = 0;
  for (const auto& [root, rec] : tree_recs_) {
    if (rec.bridges.empty() || rec.bridges.size() > 2)
      throw std::logic_error("shell: bridge bound violated");
    if (rec.m_edge.has_value() != (rec.bridges.size() == 2))
      throw std::logic_error("shell: contracted edge iff two bridges");
    rec_bridges += rec.bridges.size();
    for (const Bridge& b : rec.bridges) {
      if (!in_forest(b.tree_v) || !in_m(b.m_v))
        throw std::logic_error("shell: bridge endpoints misplaced");
      if (forest_.root(node(b.tree_v)) != root)
        throw std::logic_error("shell: bridge record keyed off-root");
      if (!grid_->adjacent(b.tree_v, b.m_v))
        throw std::logic_error("shell: bridge is not a unit disk edge");
    }
    if (rec.m_edge) {
      const Edge& ed = edges_.at(*rec.m_edge);
      std::pair<VertexId, VertexId> got =
          norm_pair(rec.bridges[0].m_v, rec.bridges[1].m_v);
      if (norm_pair(ed.u, ed.v) != got)
        throw std::logic_error("shell: contracted edge endpoints mismatch");
    }
  }

  // the forest holds exactly the shell edges among its vertices, and every
  // tree-to-M unit disk edge is a registered bridge
  std::size_t seen_bridges = 0;
  for (const auto& [v, n] : node_of_) {
    std::vector<VertexId> expect;
    for (VertexId u : grid_->neighbors_of(v)) {
      if (in_forest(u)) expect.push_back(u);
      if (in_m(u)) {
        ++seen_bridges;
        const TreeRec& rec = tree_recs_.at(forest_.root(node(v)));
        bool found = false;
        for (const Bridge& b : rec.bridges)
          if (b.tree_v == v && b.m_v == u) found = true;
        if (!found) throw std::logic_error("shell: missing bridge record");
      }
    }
    std::vector<VertexId> have;
    auto it = tree_adj_.find(v);
    if (it != tree_adj_.end()) have = it->second;
    std::sort(have.begin(), have.end());
    std::sort(expect.begin(), expect.end());
    if (have != expect)
      throw std::logic_error("shell: forest edges differ from shell edges");
  }
  if (seen_bridges != rec_bridges)
    throw std::logic_error("shell: bridge records out of sync");
}

}  // namespace udg
