#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "h4/code_table.hpp"

namespace h4 {

/// Trie form of a CodeTable. Node 0 is the root; leaves carry one symbol.
class CodeTree {
 public:
  using NodeId = std::int32_t;
  static constexpr NodeId kNone = -1;
  static constexpr NodeId kRoot = 0;

  explicit CodeTree(const CodeTable& table) {
    nodes_.emplace_back();
    for (const auto& [sym, code] : table.codes()) {
      NodeId at = kRoot;
      for (Direction d : code) {
        NodeId next = nodes_[at].children[index_of(d)];
        if (next == kNone) {
          next = static_cast<NodeId>(nodes_.size());
          nodes_[at].children[index_of(d)] = next;
          nodes_.emplace_back();
        }
        at = next;
      }
      nodes_[at].symbol = sym;
    }
  }

  NodeId child(NodeId node, Direction d) const { return nodes_[node].children[index_of(d)]; }
  bool is_leaf(NodeId node) const { return nodes_[node].symbol.has_value(); }
  const Symbol& symbol(NodeId node) const { return *nodes_[node].symbol; }
  std::size_t node_count() const { return nodes_.size(); }

  std::size_t child_count(NodeId node) const {
    std::size_t n = 0;
    for (NodeId c : nodes_[node].children) n += c != kNone;
    return n;
  }

  /// Symbols of the subtree, in L,R,U,D depth-first order.
  std::vector<Symbol> leaves(NodeId node) const {
    std::vector<Symbol> out;
    collect(node, out);
    return out;
  }

  /// The four candidate boxes shown at a node: the leaf set behind each direction.
  std::array<std::vector<Symbol>, 4> partition(NodeId node) const {
    std::array<std::vector<Symbol>, 4> boxes;
    for (Direction d : kDirections)
      if (NodeId c = child(node, d); c != kNone) collect(c, boxes[index_of(d)]);
    return boxes;
  }

  CodeTable to_table(TableSource source) const {
    std::map<Symbol, Code> codes;
    Code path;
    walk(kRoot, path, codes);
    return CodeTable(std::move(codes), source);
  }

 private:
  struct Node {
    std::array<NodeId, 4> children{kNone, kNone, kNone, kNone};
    std::optional<Symbol> symbol;
  };

  void collect(NodeId node, std::vector<Symbol>& out) const {
    if (is_leaf(node)) {
      out.push_back(symbol(node));
      return;
    }
    for (NodeId c : nodes_[node].children)
      if (c != kNone) collect(c, out);
  }

  void walk(NodeId node, Code& path, std::map<Symbol, Code>& out) const {
    if (is_leaf(node)) {
      out.emplace(symbol(node), path);
      return;
    }
    for (Direction d : kDirections) {
      if (NodeId c = child(node, d); c != kNone) {
        path.push_back(d);
        walk(c, path, out);
        path.pop_back();
      }
    }
  }

  std::vector<Node> nodes_;
};

/// Inverse of encode. Throws on a press that leaves the tree or on a trailing
/// incomplete code.
inline std::vector<Symbol> decode(const CodeTree& tree, std::span<const Direction> keys) {
  std::vector<Symbol> out;
  CodeTree::NodeId at = CodeTree::kRoot;
  std::size_t code_start = 0;
  for (std::size_t i = 0; i < keys.size(); ++i) {
    const CodeTree::NodeId next = tree.child(at, keys[i]);
    if (next == CodeTree::kNone)
      throw Error(std::string("key ") + to_char(keys[i]) + " at position " + std::to_string(i) +
                  " leaves the code tree");
    if (tree.is_leaf(next)) {
      out.push_back(tree.symbol(next));
      at = CodeTree::kRoot;
      code_start = i + 1;
    } else {
      at = next;
    }
  }
  if (at != CodeTree::kRoot)
    throw Error("incomplete trailing code starting at position " + std::to_string(code_start));
  return out;
}

inline std::vector<Symbol> decode(const CodeTable& table, std::span<const Direction> keys) {
  return decode(CodeTree(table), keys);
}

}  // namespace h4
