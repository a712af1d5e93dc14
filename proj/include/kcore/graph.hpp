#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace kcore {

using NodeId = std::uint32_t;

// Thrown on malformed edge-list input; carries the 1-based source line.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Immutable simple undirected graph in compressed adjacency form.
//
// Node ids are dense [0, node_count()). Each node's neighbor slice is strictly
// increasing, self-loop free, and mirrored (v in neighbors(u) iff u in
// neighbors(v)). Input ids survive in original_id(); densification keeps their
// ascending order, so id order is stable under relabeling-free reload.
class Graph {
 public:
  Graph() = default;

  // Build from already-dense endpoints in [0, node_count). Self-loops are
  // dropped (the node keeps its slot), parallel edges collapse.
  static Graph from_edges(std::uint32_t node_count,
                          std::span<const std::pair<NodeId, NodeId>> edges);

  std::uint32_t node_count() const noexcept { return node_count_; }
  // Undirected edge count after simplification.
  std::uint64_t edge_count() const noexcept { return edge_count_; }

  std::uint32_t degree(NodeId u) const {
    return static_cast<std::uint32_t>(offsets_[u + 1] - offsets_[u]);
  }
  std::span<const NodeId> neighbors(NodeId u) const {
    return {neighbors_.data() + offsets_[u], neighbors_.data() + offsets_[u + 1]};
  }
  bool has_edge(NodeId u, NodeId v) const;  // binary search over neighbors(u)

  std::uint64_t original_id(NodeId u) const { return original_ids_[u]; }
  const std::vector<std::uint64_t>& offsets() const noexcept { return offsets_; }
  double average_degree() const {
    return node_count_ == 0 ? 0.0 : 2.0 * static_cast<double>(edge_count_) / node_count_;
  }

  bool operator==(const Graph&) const = default;

 private:
  friend Graph build_csr(std::uint32_t, std::vector<std::pair<NodeId, NodeId>>&&,
                         std::vector<std::uint64_t>&&);

  std::uint32_t node_count_ = 0;
  std::uint64_t edge_count_ = 0;
  std::vector<std::uint64_t> offsets_ = {0};  // length node_count_ + 1
  std::vector<NodeId> neighbors_;             // length 2 * edge_count_
  std::vector<std::uint64_t> original_ids_;   // dense id -> source id, ascending
};

// Parse whitespace-separated "u v" pairs, one edge per line. Lines whose first
// non-blank character is '#' are comments. Ids are arbitrary unsigned 64-bit;
// the node set is exactly the ids that appear (self-loop-only nodes included,
// as isolated nodes).
Graph load_edge_list(std::istream& in);

// Same, from a file; .gz input is decompressed transparently.
Graph load_edge_list_file(const std::string& path);

// One line per undirected edge, original ids. Isolated nodes are written as
// self-loops so a reload reproduces the graph exactly.
void write_edge_list(const Graph& g, std::ostream& out);

}  // namespace kcore
