#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <queue>
#include <vector>

#include "h4/code_table.hpp"
#include "h4/frequency_table.hpp"

namespace h4 {

namespace detail {

/// Number of zero-weight placeholders needed so that an arity-ary merge tree
/// is full: (symbols + dummies - 1) divisible by (arity - 1).
constexpr std::size_t huffman_padding(std::size_t symbols, std::size_t arity) {
  if (symbols <= 1) return 0;
  const std::size_t rem = (symbols - 1) % (arity - 1);
  return rem == 0 ? 0 : (arity - 1) - rem;
}

struct MergeNode {
  double weight = 0.0;
  // Zero-frequency real symbols count as an infinitesimal weight each, so
  // they sink below every positive-weight symbol but stay above the dummies.
  std::size_t epsilon = 0;
  // Canonical rank of the smallest symbol contained; dummies rank below all symbols.
  long min_rank = 0;
  long symbol = -1;  // rank of the symbol for real leaves, -1 otherwise
  std::vector<std::size_t> children;
};

// Merge order: lightest first, ties by smallest contained symbol.
inline bool lighter(const MergeNode& a, const MergeNode& b) {
  if (a.weight != b.weight) return a.weight < b.weight;
  if (a.epsilon != b.epsilon) return a.epsilon < b.epsilon;
  return a.min_rank < b.min_rank;
}

// Direction order inside a merged node: heaviest first, ties by smallest symbol.
inline bool heavier(const MergeNode& a, const MergeNode& b) {
  if (a.weight != b.weight) return a.weight > b.weight;
  if (a.epsilon != b.epsilon) return a.epsilon > b.epsilon;
  return a.min_rank < b.min_rank;
}

inline CodeTable build_huffman_code(const SymbolFrequencyTable& freqs, std::size_t arity) {
  if (arity < 2 || arity > kDirections.size()) throw Error("unsupported code arity");

  std::vector<FrequencyEntry> sorted = freqs.entries();
  std::sort(sorted.begin(), sorted.end(),
            [](const auto& a, const auto& b) { return a.symbol < b.symbol; });

  std::map<Symbol, Code> codes;
  if (sorted.size() == 1) {
    codes.emplace(sorted.front().symbol, Code{Direction::L});
    return CodeTable(std::move(codes), TableSource::generated);
  }

  std::vector<MergeNode> nodes;
  const std::size_t dummies = huffman_padding(sorted.size(), arity);
  for (std::size_t i = 0; i < dummies; ++i) {
    MergeNode n;
    n.min_rank = -1 - static_cast<long>(i);
    nodes.push_back(n);
  }
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    MergeNode n;
    n.weight = sorted[i].frequency;
    n.epsilon = sorted[i].frequency > 0.0 ? 0 : 1;
    n.min_rank = static_cast<long>(i);
    n.symbol = static_cast<long>(i);
    nodes.push_back(n);
  }

  auto cmp = [&nodes](std::size_t a, std::size_t b) { return lighter(nodes[b], nodes[a]); };
  std::priority_queue<std::size_t, std::vector<std::size_t>, decltype(cmp)> queue(cmp);
  for (std::size_t i = 0; i < nodes.size(); ++i) queue.push(i);

  while (queue.size() > 1) {
    MergeNode parent;
    parent.min_rank = static_cast<long>(sorted.size());
    for (std::size_t k = 0; k < arity; ++k) {
      const std::size_t c = queue.top();
      queue.pop();
      parent.weight += nodes[c].weight;
      parent.epsilon += nodes[c].epsilon;
      parent.min_rank = std::min(parent.min_rank, nodes[c].min_rank);
      parent.children.push_back(c);
    }
    std::sort(parent.children.begin(), parent.children.end(),
              [&nodes](std::size_t a, std::size_t b) { return heavier(nodes[a], nodes[b]); });
    nodes.push_back(std::move(parent));
    queue.push(nodes.size() - 1);
  }

  // Depth-first code assignment; dummy leaves are simply dropped.
  struct Frame {
    std::size_t node;
    Code code;
  };
  std::vector<Frame> stack{{queue.top(), {}}};
  while (!stack.empty()) {
    Frame f = std::move(stack.back());
    stack.pop_back();
    const MergeNode& n = nodes[f.node];
    if (n.children.empty()) {
      if (n.symbol >= 0) codes.emplace(sorted[n.symbol].symbol, std::move(f.code));
      continue;
    }
    for (std::size_t k = 0; k < n.children.size(); ++k) {
      Code child = f.code;
      child.push_back(kDirections[k]);
      stack.push_back({n.children[k], std::move(child)});
    }
  }
  return CodeTable(std::move(codes), TableSource::generated);
}

}  // namespace detail

/// Minimum-redundancy 4-ary prefix code over {L,R,U,D}.
///
/// Standard n-ary Huffman construction with zero-weight dummy padding. The
/// result is fully deterministic: merge ties break on the smallest symbol
/// contained in each node, and the children of a merged node take L,R,U,D in
/// descending subtree weight. A single-symbol alphabet gets the code "L".
inline CodeTable build_code_table(const SymbolFrequencyTable& freqs) {
  return detail::build_huffman_code(freqs, 4);
}

}  // namespace h4
