#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "udg/geometry.hpp"

namespace udg {

// Simple undirected graph over caller-supplied vertex ids. Internally edges
// and adjacency use dense indices into `vertices`.
struct SimpleGraph {
  std::vector<VertexId> vertices;            // sorted ascending
  std::vector<std::pair<int, int>> edges;    // a < b, sorted
  std::vector<std::vector<int>> adj;         // per-index, sorted

  int index_of(VertexId v) const {
    auto it = std::lower_bound(vertices.begin(), vertices.end(), v);
    if (it == vertices.end() || *it != v) return -1;
    return static_cast<int>(it - vertices.begin());
  }

  int n() const { return static_cast<int>(vertices.size()); }
  int m() const { return static_cast<int>(edges.size()); }

  bool has_edge(int a, int b) const {
    return std::binary_search(adj[a].begin(), adj[a].end(), b);
  }

  static SimpleGraph build(std::vector<VertexId> verts,
                           std::vector<std::pair<VertexId, VertexId>> id_edges) {
    SimpleGraph g;
    std::sort(verts.begin(), verts.end());
    verts.erase(std::unique(verts.begin(), verts.end()), verts.end());
    g.vertices = std::move(verts);
    g.adj.resize(g.vertices.size());
    for (auto [u, v] : id_edges) {
      int a = g.index_of(u), b = g.index_of(v);
      if (a > b) std::swap(a, b);
      g.edges.emplace_back(a, b);
    }
    std::sort(g.edges.begin(), g.edges.end());
    g.edges.erase(std::unique(g.edges.begin(), g.edges.end()), g.edges.end());
    for (auto [a, b] : g.edges) {
      g.adj[a].push_back(b);
      g.adj[b].push_back(a);
    }
    for (auto& row : g.adj) std::sort(row.begin(), row.end());
    return g;
  }
};

// Multigraph with loops and parallel edges. A contracted edge carries its
// expansion: the full vertex path between endpoints (both included; for a
// loop the path starts and ends at the same vertex).
struct MultiEdge {
  int a = 0;
  int b = 0;
  std::vector<VertexId> expansion;  // empty for a plain edge
};

struct Multigraph {
  std::vector<VertexId> vertices;  // sorted ascending
  std::vector<MultiEdge> edges;
  std::vector<std::vector<int>> incident;  // vertex index -> edge indices

  int index_of(VertexId v) const {
    auto it = std::lower_bound(vertices.begin(), vertices.end(), v);
    if (it == vertices.end() || *it != v) return -1;
    return static_cast<int>(it - vertices.begin());
  }

  int n() const { return static_cast<int>(vertices.size()); }
  int m() const { return static_cast<int>(edges.size()); }

  void finish() {
    std::sort(edges.begin(), edges.end(), [](const MultiEdge& x, const MultiEdge& y) {
      if (x.a != y.a) return x.a < y.a;
      if (x.b != y.b) return x.b < y.b;
      return x.expansion < y.expansion;
    });
    incident.assign(vertices.size(), {});
    for (int e = 0; e < m(); ++e) {
      incident[edges[e].a].push_back(e);
      if (edges[e].b != edges[e].a) incident[edges[e].b].push_back(e);
    }
  }

  // Loops count twice.
  int degree(int v) const {
    int d = 0;
    for (int e : incident[v]) d += (edges[e].a == v) + (edges[e].b == v);
    return d;
  }
};

}  // namespace udg
