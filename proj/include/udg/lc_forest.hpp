#pragma once

#include <cstdint>
#include <vector>

namespace udg {

using NodeId = std::uint32_t;

// Self-adjusting (splay-based) link-cut forest over opaque node handles.
// Query operations restructure internals, so exclusive access is required
// even for connected/root/lca.
class LinkCutForest {
 public:
  NodeId make_node();
  void discard_node(NodeId v);  // only isolated roots

  void link(NodeId u, NodeId v);  // v must be a root in another tree; u becomes parent of v
  void cut(NodeId v);             // v must not be a root
  void evert(NodeId v);           // make v the root of its tree

  bool connected(NodeId u, NodeId v);
  NodeId root(NodeId u);
  NodeId lca(NodeId u, NodeId v);  // requires connected(u, v)

  bool alive(NodeId v) const { return v < nodes_.size() && nodes_[v].alive; }
  int tree_degree(NodeId v) const { return nodes_[v].deg; }
  std::size_t live_count() const { return live_; }

 private:
  struct Node {
    NodeId parent = kNil;
    NodeId ch[2] = {kNil, kNil};
    int deg = 0;  // degree in the represented tree
    bool flip = false;
    bool alive = false;
  };
  static constexpr NodeId kNil = static_cast<NodeId>(-1);

  void check(NodeId v) const;
  void push(NodeId x);
  int dir(NodeId x) const;  // -1 when x is a splay root / path-parent edge
  void rotate(NodeId x);
  void splay(NodeId x);
  NodeId access(NodeId x);  // returns the last path-top switched to

  std::vector<Node> nodes_;
  std::vector<NodeId> free_;
  std::size_t live_ = 0;
};

}  // namespace udg
