#include "udg/lc_forest.hpp"

#include <string>
#include <utility>

#include "udg/error.hpp"

namespace udg {

void LinkCutForest::check(NodeId v) const {
  if (!alive(v))
    throw Error(ErrorCode::unknown_vertex,
                "lc_forest: node " + std::to_string(v) + " not alive");
}

NodeId LinkCutForest::make_node() {
  NodeId id;
  if (!free_.empty()) {
    id = free_.back();
    free_.pop_back();
    nodes_[id] = Node{};
  } else {
    id = static_cast<NodeId>(nodes_.size());
    nodes_.emplace_back();
  }
  nodes_[id].alive = true;
  ++live_;
  return id;
}

void LinkCutForest::discard_node(NodeId v) {
  check(v);
  if (nodes_[v].deg != 0)
    throw Error(ErrorCode::not_isolated, "discard_node: node has tree edges");
  nodes_[v] = Node{};
  free_.push_back(v);
  --live_;
}

void LinkCutForest::push(NodeId x) {
  Node& n = nodes_[x];
  if (!n.flip) return;
  std::swap(n.ch[0], n.ch[1]);
  if (n.ch[0] != kNil) nodes_[n.ch[0]].flip ^= 1;
  if (n.ch[1] != kNil) nodes_[n.ch[1]].flip ^= 1;
  n.flip = false;
}

int LinkCutForest::dir(NodeId x) const {
  NodeId p = nodes_[x].parent;
  if (p == kNil) return -1;
  if (nodes_[p].ch[0] == x) return 0;
  if (nodes_[p].ch[1] == x) return 1;
  return -1;  // path-parent pointer
}

void LinkCutForest::rotate(NodeId x) {
  NodeId y = nodes_[x].parent;
  NodeId z = nodes_[y].parent;
  int dx = dir(x), dy = dir(y);
  NodeId b = nodes_[x].ch[!dx];
  nodes_[y].ch[dx] = b;
  if (b != kNil) nodes_[b].parent = y;
  nodes_[x].ch[!dx] = y;
  nodes_[y].parent = x;
  nodes_[x].parent = z;
  if (dy != -1) nodes_[z].ch[dy] = x;
}

void LinkCutForest::splay(NodeId x) {
  push(x);
  while (dir(x) != -1) {
    NodeId y = nodes_[x].parent;
    NodeId z = nodes_[y].parent;
    if (dir(y) != -1) push(z);
    push(y);
    push(x);
    if (dir(y) != -1) rotate(dir(x) == dir(y) ? y : x);
    rotate(x);
  }
}

NodeId LinkCutForest::access(NodeId x) {
  NodeId last = kNil;
  for (NodeId y = x; y != kNil; y = nodes_[y].parent) {
    splay(y);
    nodes_[y].ch[1] = last;
    if (last != kNil) nodes_[last].parent = y;
    last = y;
  }
  splay(x);
  return last;
}

void LinkCutForest::evert(NodeId v) {
  check(v);
  access(v);
  nodes_[v].flip ^= 1;
}

NodeId LinkCutForest::root(NodeId u) {
  check(u);
  access(u);
  NodeId x = u;
  push(x);
  while (nodes_[x].ch[0] != kNil) {
    x = nodes_[x].ch[0];
    push(x);
  }
  splay(x);
  return x;
}

bool LinkCutForest::connected(NodeId u, NodeId v) {
  check(u);
  check(v);
  if (u == v) return true;
  return root(u) == root(v);
}

void LinkCutForest::link(NodeId u, NodeId v) {
  check(u);
  check(v);
  if (root(v) != v)
    throw Error(ErrorCode::not_a_root, "link: v is not a root");
  if (root(u) == v)
    throw Error(ErrorCode::same_tree, "link: u and v already connected");
  access(v);
  access(u);
  nodes_[v].parent = u;
  ++nodes_[u].deg;
  ++nodes_[v].deg;
}

void LinkCutForest::cut(NodeId v) {
  check(v);
  access(v);
  if (nodes_[v].ch[0] == kNil)
    throw Error(ErrorCode::is_a_root, "cut: v is a root");
  NodeId l = nodes_[v].ch[0];
  nodes_[l].parent = kNil;
  nodes_[v].ch[0] = kNil;
  // The detached parent is the rightmost node of the left subtree.
  push(l);
  while (nodes_[l].ch[1] != kNil) {
    l = nodes_[l].ch[1];
    push(l);
  }
  splay(l);
  --nodes_[l].deg;
  --nodes_[v].deg;
}

NodeId LinkCutForest::lca(NodeId u, NodeId v) {
  check(u);
  check(v);
  if (!connected(u, v))
    throw Error(ErrorCode::disconnected, "lca: nodes in different trees");
  if (u == v) return u;
  access(u);
  return access(v);
}

}  // namespace udg
