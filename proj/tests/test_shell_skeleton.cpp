#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <random>
#include <set>

#include "doctest.h"
#include "udg/kernel_solvers.hpp"
#include "udg/shell_skeleton.hpp"

using namespace udg;

namespace {

struct Driver {
  GridIndex grid;
  CoreCluster core;
  ShellState shell;

  Driver() : core(grid), shell(grid, core) {}

  void insert(VertexId v, Point p) {
    CellId c = grid.insert_vertex(v, p);
    auto delta = core.apply_insert(v, p, c);
    shell.apply_update(delta, UpdateOp::insert, v, p, c);
  }
  void erase(VertexId v) {
    Point p = grid.point_of(v);
    CellId c = grid.erase_vertex(v);
    auto delta = core.apply_delete(v, p, c);
    shell.apply_update(delta, UpdateOp::erase, v, p, c);
  }

  void golden() {
    shell.check_invariants();
    auto scratch = ShellState::rebuild_from_scratch(grid, core);
    CHECK(shell.canonical_form() == scratch.canonical_form());
  }
};

SimpleGraph whole_udg(const GridIndex& g) {
  std::vector<VertexId> all;
  for (const auto& [v, p] : g.points()) all.push_back(v);
  return g.induced_udg(all);
}

int brute_min_fvs(const GridIndex& g) {
  auto udg = whole_udg(g);
  Multigraph mg;
  mg.vertices = udg.vertices;
  for (auto [a, b] : udg.edges) mg.edges.push_back({a, b, {}});
  mg.finish();
  int k = 0;
  while (!solvers::oracle_solve(solvers::Problem::fvs, mg, k).yes) ++k;
  return k;
}

bool brute_cp(const GridIndex& g, int k) {
  auto udg = whole_udg(g);
  Multigraph mg;
  mg.vertices = udg.vertices;
  for (auto [a, b] : udg.edges) mg.edges.push_back({a, b, {}});
  mg.finish();
  return solvers::oracle_solve(solvers::Problem::cp, mg, k).yes;
}

bool disjoint_valid_cycles(const GridIndex& g,
                           const std::vector<std::vector<VertexId>>& cycles,
                           int k) {
  if (static_cast<int>(cycles.size()) < k) return false;
  std::set<VertexId> used;
  for (const auto& cyc : cycles) {
    if (cyc.size() < 3) return false;
    for (VertexId v : cyc)
      if (!used.insert(v).second) return false;
    for (std::size_t i = 0; i < cyc.size(); ++i)
      if (!g.adjacent(cyc[i], cyc[(i + 1) % cyc.size()])) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("all vertices in the core leave an empty skeleton") {
  Driver d;
  for (VertexId v = 0; v < 5; ++v) d.insert(v, {1.0, 1.0});
  CHECK(d.shell.stats().m_vertices == 0);
  CHECK(d.shell.stats().trees == 0);
  d.golden();
  auto g = d.shell.glue_kernel();
  CHECK(g.n() == 5);
  CHECK(g.m() == 10);  // the co-located clique
}

TEST_CASE("a bare shell path peels into one bridge-less tree") {
  Driver d;
  d.insert(0, {0.0, 0.0});
  d.insert(1, {0.6, 0.0});
  d.insert(2, {1.2, 0.0});
  CHECK(d.shell.stats().m_vertices == 0);
  CHECK(d.shell.stats().trees == 1);
  d.golden();
}

TEST_CASE("a square shell cycle becomes an anchor with a self-loop") {
  Driver d;
  d.insert(0, {0.0, 0.0});
  d.insert(1, {0.9, 0.0});
  d.insert(2, {0.9, 0.9});
  d.insert(3, {0.0, 0.9});
  auto st = d.shell.stats();
  CHECK(st.m_vertices == 1);  // the anchor
  CHECK(st.m_edges == 1);     // its loop
  CHECK(st.trees == 1);       // three vertices, two bridges
  d.golden();

  // the glued kernel sees the loop
  auto g = d.shell.glue_kernel();
  CHECK(g.n() == 1);
  REQUIRE(g.m() == 1);
  CHECK(g.edges[0].a == g.edges[0].b);
  CHECK(g.edges[0].expansion.size() == 5);  // closed walk over 4 vertices

  SUBCASE("fvs and cp answers on the cycle") {
    CHECK_FALSE(d.shell.query_fvs(0).has_value());
    auto fvs = d.shell.query_fvs(1);
    REQUIRE(fvs.has_value());
    CHECK(fvs->size() == 1);

    auto cp = d.shell.query_cp(1);
    REQUIRE(cp.has_value());
    CHECK(disjoint_valid_cycles(d.grid, *cp, 1));
    CHECK_FALSE(d.shell.query_cp(2).has_value());
  }

  SUBCASE("deleting a cycle vertex dissolves the loop") {
    d.erase(2);
    CHECK(d.shell.stats().m_edges == 0);
    CHECK(d.shell.stats().m_vertices == 0);
    d.golden();
  }
}

TEST_CASE("push cases against scratch, step by step") {
  Driver d;
  std::mt19937_64 rng(4242);
  // a long meandering shell path with stubs, grown and shrunk out of order
  std::vector<std::pair<VertexId, Point>> plan = {
      {0, {0.0, 0.0}},  {1, {0.7, 0.2}},  {2, {1.4, 0.0}},  {3, {2.1, 0.2}},
      {4, {2.8, 0.0}},  {5, {3.5, 0.2}},  {6, {0.2, 0.8}},  {7, {1.2, 0.9}},
      {8, {2.3, 1.0}},  {9, {3.3, 0.9}},  {10, {0.8, 1.5}}, {11, {1.9, 1.7}},
      {12, {3.0, 1.6}}, {13, {1.3, 2.3}}, {14, {2.5, 2.4}},
  };
  for (auto [v, p] : plan) {
    d.insert(v, p);
    d.golden();
  }
  for (VertexId v : {7, 2, 11, 0, 14}) {
    d.erase(v);
    d.golden();
  }
}

TEST_CASE("boundary vertices survive next to the core rim") {
  Driver d;
  // a heavy cell whose 10-neighborhood is core, a lone vertex on the rim,
  // and a shell chain reaching in from outside
  d.insert(0, {0.0, 0.0});
  d.insert(1, {0.0, 0.0});
  d.insert(2, {0.0, 0.0});
  d.insert(10, {7.0, 0.0});  // rim cell, inside the core, no neighbors there
  d.insert(11, {7.9, 0.0});  // shell, adjacent to 10: boundary
  d.insert(12, {8.8, 0.0});  // shell, ordinary
  d.golden();
  CHECK(d.core.in_core(10));
  CHECK_FALSE(d.shell.in_shell(10));
  CHECK(d.shell.in_m(11));  // boundary vertices stay in the skeleton

  auto g = d.shell.glue_kernel();
  CHECK(g.index_of(11) >= 0);
  bool has_boundary_edge = false;
  for (const auto& e : g.edges)
    if (g.vertices[e.a] == 10 && g.vertices[e.b] == 11) has_boundary_edge = true;
  CHECK(has_boundary_edge);

  CHECK_FALSE(d.shell.query_fvs(0).has_value());
  auto fvs = d.shell.query_fvs(1);
  REQUIRE(fvs.has_value());
  CHECK(fvs->size() == 1);
}

TEST_CASE("core triangle plus far shell cycle needs two fvs vertices") {
  Driver d;
  d.insert(0, {0.0, 0.0});
  d.insert(1, {0.5, 0.0});
  d.insert(2, {0.25, 0.4});
  d.insert(10, {20.0, 20.0});
  d.insert(11, {20.9, 20.0});
  d.insert(12, {20.9, 20.9});
  d.insert(13, {20.0, 20.9});
  d.golden();
  CHECK_FALSE(d.shell.query_fvs(1).has_value());
  auto fvs = d.shell.query_fvs(2);
  REQUIRE(fvs.has_value());

  auto cp = d.shell.query_cp(2);
  REQUIRE(cp.has_value());
  CHECK(disjoint_valid_cycles(d.grid, *cp, 2));
}

TEST_CASE("two far shell cycles pack two disjoint cycles") {
  Driver d;
  d.insert(0, {0.0, 0.0});
  d.insert(1, {0.9, 0.0});
  d.insert(2, {0.9, 0.9});
  d.insert(3, {0.0, 0.9});
  d.insert(10, {30.0, 0.0});
  d.insert(11, {30.9, 0.0});
  d.insert(12, {30.9, 0.9});
  d.insert(13, {30.0, 0.9});
  d.golden();
  auto cp = d.shell.query_cp(2);
  REQUIRE(cp.has_value());
  CHECK(disjoint_valid_cycles(d.grid, *cp, 2));
  CHECK_FALSE(d.shell.query_cp(3).has_value());
}

TEST_CASE("splitting a two-bridge tree at the attachment point") {
  Driver d;
  // the boundary-junction theta scaffold again
  d.insert(20, {-8.2, 0.0});
  d.insert(21, {-8.2, 0.0});
  d.insert(22, {-8.2, 0.0});
  d.insert(23, {10.7, 0.0});
  d.insert(24, {10.7, 0.0});
  d.insert(25, {10.7, 0.0});
  d.insert(30, {-0.97, 0.0});
  d.insert(31, {3.97, 0.0});
  d.insert(0, {0.0, 0.0});
  d.insert(1, {3.0, 0.0});
  d.insert(2, {0.75, 0.65});
  d.insert(3, {1.5, 0.8});
  d.insert(4, {2.25, 0.65});
  d.insert(5, {0.75, -0.65});
  d.insert(6, {1.5, -0.8});
  d.insert(7, {2.25, -0.65});
  // a third heavy cell overhead gives the splitter its own rim vertex
  d.insert(26, {1.5, 9.5});
  d.insert(27, {1.5, 9.5});
  d.insert(28, {1.5, 9.5});
  d.insert(32, {1.5, 2.55});
  d.golden();
  CHECK(d.shell.stats().m_vertices == 2);

  // 40 attaches to the top arc's middle vertex and to its own rim: the arc's
  // backing tree splits at the attachment, which joins M alongside 40
  d.insert(40, {1.5, 1.6});
  d.golden();
  CHECK(d.shell.in_m(40));
  CHECK(d.shell.in_m(3));
  CHECK(d.shell.stats().m_vertices == 4);
  CHECK(d.shell.stats().m_edges == 4);  // A-3, 3-B, 3-40, bottom arc A-B

  // removing the splitter re-contracts the two halves into one edge
  d.erase(40);
  d.golden();
  CHECK(d.shell.stats().m_vertices == 2);
  CHECK(d.shell.stats().m_edges == 2);

  // deleting an interior vertex on the bridge path drops the contracted
  // edge; reinserting restores it through two one-bridge trees
  d.erase(3);
  d.golden();
  CHECK(d.shell.stats().m_edges == 1);
  d.insert(41, {1.5, 0.8});
  d.golden();
  CHECK(d.shell.stats().m_edges == 2);
}

TEST_CASE("a push closing a cycle makes the new vertex the anchor") {
  Driver d;
  // a U-shaped bare path, then a vertex adjacent to both ends only
  d.insert(0, {0.0, 0.0});
  d.insert(1, {0.8, 0.5});
  d.insert(2, {1.6, 0.2});
  d.insert(3, {1.55, -0.75});
  d.golden();
  CHECK(d.shell.stats().m_vertices == 0);
  CHECK(d.shell.stats().trees == 1);

  d.insert(4, {0.75, -0.55});
  d.golden();
  auto st = d.shell.stats();
  CHECK(st.m_vertices == 1);
  CHECK(st.m_edges == 1);  // the loop
  CHECK(d.shell.in_m(4));  // the pushed vertex carries the loop

  CHECK(d.shell.query_cp(1).has_value());
  CHECK_FALSE(d.shell.query_fvs(0).has_value());

  // deleting an interior cycle vertex kills the loop and the anchor with it
  d.erase(1);
  d.golden();
  CHECK(d.shell.stats().m_vertices == 0);
  CHECK(d.shell.stats().m_edges == 0);
  CHECK_FALSE(d.shell.query_cp(1).has_value());
}

TEST_CASE("golden invariant under random mixed traces") {
  std::mt19937_64 rng(1234);
  for (int trace = 0; trace < 12; ++trace) {
    Driver d;
    std::uniform_real_distribution<double> coord(0.0, 4.5);
    std::vector<VertexId> active;
    VertexId next = 0;
    for (int step = 0; step < 70; ++step) {
      if (active.size() < 24 && (active.empty() || rng() % 3 != 0)) {
        Point p{coord(rng), coord(rng)};
        d.insert(next, p);
        active.push_back(next++);
      } else {
        std::size_t i = rng() % active.size();
        d.erase(active[i]);
        active.erase(active.begin() + i);
      }
      d.golden();
    }
  }
}

TEST_CASE("query decisions match brute force on random states") {
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> coord(0.0, 4.0);
  Driver d;
  std::vector<VertexId> active;
  VertexId next = 0;
  for (int step = 0; step < 90; ++step) {
    if (active.size() < 20 && (active.empty() || rng() % 3 != 0)) {
      Point p{coord(rng), coord(rng)};
      d.insert(next, p);
      active.push_back(next++);
    } else {
      std::size_t i = rng() % active.size();
      d.erase(active[i]);
      active.erase(active.begin() + i);
    }
    if (step % 9 != 0) continue;
    int opt = brute_min_fvs(d.grid);
    for (int k = 0; k <= 3; ++k) {
      auto ans = d.shell.query_fvs(k);
      CHECK(ans.has_value() == (opt <= k));
      if (ans) {
        // removal leaves the unit disk graph acyclic
        std::set<VertexId> rm(ans->begin(), ans->end());
        CHECK(static_cast<int>(rm.size()) <= k);
        std::vector<VertexId> rest;
        for (VertexId v : active)
          if (!rm.count(v)) rest.push_back(v);
        auto sub = d.grid.induced_udg(rest);
        Multigraph mg;
        mg.vertices = sub.vertices;
        for (auto [a, b] : sub.edges) mg.edges.push_back({a, b, {}});
        mg.finish();
        CHECK(solvers::oracle_solve(solvers::Problem::fvs, mg, 0).yes);
      }
    }
    for (int k = 1; k <= 2; ++k) {
      auto ans = d.shell.query_cp(k);
      CHECK(ans.has_value() == brute_cp(d.grid, k));
      if (ans) CHECK(disjoint_valid_cycles(d.grid, *ans, k));
    }
  }
}

TEST_CASE("parallel contracted edges between boundary junctions") {
  Driver d;
  // heavy cells far left and right make one rim vertex core on each side;
  // the junctions A, B next to them are boundary and two disjoint shell
  // arcs join A to B
  d.insert(20, {-8.2, 0.0});
  d.insert(21, {-8.2, 0.0});
  d.insert(22, {-8.2, 0.0});
  d.insert(23, {10.7, 0.0});
  d.insert(24, {10.7, 0.0});
  d.insert(25, {10.7, 0.0});
  d.insert(30, {-0.97, 0.0});  // rim core vertex next to A
  d.insert(31, {3.97, 0.0});   // rim core vertex next to B
  d.insert(0, {0.0, 0.0});     // junction A
  d.insert(1, {3.0, 0.0});     // junction B
  d.insert(2, {0.75, 0.65});   // top arc
  d.insert(3, {1.5, 0.8});
  d.insert(4, {2.25, 0.65});
  d.insert(5, {0.75, -0.65});  // bottom arc
  d.insert(6, {1.5, -0.8});
  d.insert(7, {2.25, -0.65});
  d.golden();

  CHECK(d.core.in_core(30));
  CHECK(d.core.in_core(31));
  CHECK(d.shell.in_m(0));
  CHECK(d.shell.in_m(1));
  CHECK(d.shell.stats().m_vertices == 2);
  CHECK(d.shell.stats().m_edges == 2);  // the parallel pair

  auto g = d.shell.glue_kernel();
  std::vector<const MultiEdge*> contracted;
  for (const auto& e : g.edges)
    if (!e.expansion.empty()) contracted.push_back(&e);
  REQUIRE(contracted.size() == 2);
  std::set<VertexId> interiors;
  for (const auto* e : contracted)
    for (std::size_t i = 1; i + 1 < e->expansion.size(); ++i)
      CHECK(interiors.insert(e->expansion[i]).second);

  // two blob triangles plus the theta cycle: three disjoint cycles
  CHECK_FALSE(d.shell.query_fvs(2).has_value());
  CHECK(d.shell.query_fvs(3).has_value());
  auto cp = d.shell.query_cp(3);
  REQUIRE(cp.has_value());
  CHECK(disjoint_valid_cycles(d.grid, *cp, 3));
  CHECK_FALSE(d.shell.query_cp(4).has_value());
}
