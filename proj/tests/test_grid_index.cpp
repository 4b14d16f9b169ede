#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <algorithm>
#include <random>

#include "doctest.h"
#include "udg/error.hpp"
#include "udg/grid_index.hpp"

using namespace udg;

TEST_CASE("cell ids quantize at side 1/sqrt(2)") {
  CHECK(cell_of({0.0, 0.0}) == CellId{0, 0});
  CHECK(cell_of({0.9, 0.2}) == CellId{1, 0});
  CHECK(cell_of({-0.1, 0.0}) == CellId{-1, 0});
}

TEST_CASE("cell distance is Chebyshev") {
  CHECK(cell_distance({0, 0}, {0, 0}) == 0);
  CHECK(cell_distance({3, 7}, {5, 4}) == 3);
  CHECK(cell_distance({-2, 0}, {2, 0}) == 4);
}

TEST_CASE("neighbor cells come in (2l+1)^2 blocks including the center") {
  CHECK(neighbor_cells({0, 0}, 1).size() == 9);
  CHECK(neighbor_cells({4, -3}, 5).size() == 121);
  CHECK(neighbor_cells({0, 0}, 10).size() == 441);
  auto cells = neighbor_cells({2, 2}, 1);
  CHECK(std::find(cells.begin(), cells.end(), CellId{2, 2}) != cells.end());
}

TEST_CASE("insert, delete and the distinct error values") {
  GridIndex g;
  CHECK(g.insert_vertex(0, {0.0, 0.0}) == CellId{0, 0});
  CHECK(g.cell_count({0, 0}) == 1);
  g.insert_vertex(1, {0.1, 0.1});
  CHECK(g.cell_count({0, 0}) == 2);

  CHECK_THROWS_WITH_AS(g.insert_vertex(0, {2.0, 2.0}), doctest::Contains("already active"),
                       Error);
  try {
    g.insert_vertex(1, {1, 1});
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::duplicate_insert);
  }

  g.erase_vertex(0);
  try {
    g.erase_vertex(0);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::unknown_vertex);
  }

  g.erase_vertex(1);
  CHECK(g.cells().empty());  // no empty cell records retained
}

TEST_CASE("cell_stats counts the cluster exactly") {
  GridIndex g;
  CHECK(g.cell_stats({0, 0}, 2) == std::pair<std::size_t, std::size_t>{0, 0});
  g.insert_vertex(0, {0.1, 0.1});
  g.insert_vertex(1, {0.2, 0.2});
  g.insert_vertex(2, {0.3, 0.3});
  CHECK(g.cell_stats({0, 0}, 2) == std::pair<std::size_t, std::size_t>{3, 3});
  CHECK(g.cell_stats({0, 0}, 0) == std::pair<std::size_t, std::size_t>{3, 3});

  GridIndex h;
  h.insert_vertex(0, {0.1, 0.1});
  h.insert_vertex(1, {0.1 + 3.0 / 1.4142135623730951, 0.1});  // 3 cells away
  CHECK(h.cell_stats({0, 0}, 2).second == 1);
  CHECK(h.cell_stats({0, 0}, 3).second == 2);
}

TEST_CASE("adjacency threshold is closed") {
  GridIndex g;
  g.insert_vertex(0, {0.0, 0.0});
  g.insert_vertex(1, {0.0, 1.0});
  g.insert_vertex(2, {0.0, -1.000001});
  CHECK(g.adjacent(0, 1));
  CHECK_FALSE(g.adjacent(0, 2));
  CHECK_THROWS_AS((void)g.adjacent(0, 0), Error);
  CHECK_THROWS_AS((void)g.adjacent(0, 99), Error);
}

TEST_CASE("neighbors_of matches direct geometry") {
  GridIndex g;
  g.insert_vertex(10, {0.0, 0.0});
  CHECK(g.neighbors_of(10).empty());

  g.insert_vertex(11, {0.6, 0.0});
  g.insert_vertex(12, {1.2, 0.0});
  CHECK(g.neighbors_of(11) == std::vector<VertexId>{10, 12});
  CHECK(g.neighbors_of(10) == std::vector<VertexId>{11});

  GridIndex h;
  h.insert_vertex(0, {5.0, 5.0});
  h.insert_vertex(1, {5.0, 5.0});
  h.insert_vertex(2, {5.0, 5.0});
  CHECK(h.neighbors_of(0).size() == 2);
  CHECK(h.neighbors_of(2).size() == 2);
}

TEST_CASE("induced_udg materializes the unit disk graph on a subset") {
  GridIndex g;
  CHECK(g.induced_udg({}).n() == 0);

  g.insert_vertex(0, {0.0, 0.0});
  g.insert_vertex(1, {0.6, 0.0});
  g.insert_vertex(2, {1.2, 0.0});
  std::vector<VertexId> all{0, 1, 2};
  auto path = g.induced_udg(all);
  CHECK(path.m() == 2);

  GridIndex sq;
  sq.insert_vertex(0, {0.0, 0.0});
  sq.insert_vertex(1, {0.9, 0.0});
  sq.insert_vertex(2, {0.9, 0.9});
  sq.insert_vertex(3, {0.0, 0.9});
  std::vector<VertexId> corners{0, 1, 2, 3};
  auto cycle = sq.induced_udg(corners);
  CHECK(cycle.m() == 4);  // no diagonals: 0.9*sqrt(2) > 1
  for (auto [a, b] : cycle.edges) CHECK((a + b) % 2 == 1);
}

TEST_CASE("random states: neighbors_of equals brute force and cell facts hold") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> coord(0.0, 5.0);
  GridIndex g;
  std::vector<std::pair<VertexId, Point>> active;
  VertexId next = 0;
  for (int step = 0; step < 400; ++step) {
    if (active.empty() || rng() % 3 != 0) {
      Point p{coord(rng), coord(rng)};
      g.insert_vertex(next, p);
      active.push_back({next, p});
      ++next;
    } else {
      std::size_t i = rng() % active.size();
      g.erase_vertex(active[i].first);
      active.erase(active.begin() + i);
    }
    if (step % 37 != 0) continue;
    for (auto [v, p] : active) {
      std::vector<VertexId> brute;
      for (auto [u, q] : active)
        if (u != v && dist2(p, q) <= 1.0) brute.push_back(u);
      std::sort(brute.begin(), brute.end());
      CHECK(g.neighbors_of(v) == brute);
      for (VertexId u : brute)
        CHECK(cell_distance(cell_of(p), g.cell_of_vertex(u)) <= 2);
    }
    // same-cell points are pairwise adjacent
    for (const auto& [c, members] : g.cells())
      for (std::size_t i = 0; i < members.size(); ++i)
        for (std::size_t j = i + 1; j < members.size(); ++j)
          CHECK(g.adjacent(members[i], members[j]));
  }
}
