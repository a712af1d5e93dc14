#pragma once

#include <cstdint>
#include <vector>

#include "kcore/graph.hpp"

namespace kcore {

struct CorenessResult {
  std::vector<std::uint32_t> coreness;  // indexed by dense node id
  std::uint32_t k_max = 0;
  double k_avg = 0.0;
};

// Wrap a coreness vector, filling in the aggregates. Empty input is legal
// (k_max 0, k_avg 0).
CorenessResult make_coreness_result(std::vector<std::uint32_t> coreness);

// Exact coreness by bucket peeling: repeatedly remove a minimum-degree node;
// a node's coreness is its degree at removal, made monotone by the bucket
// structure. O(|V| + |E|) time, O(|V|) extra space. Deterministic.
CorenessResult peel_coreness(const Graph& g);

struct Mismatch {
  NodeId node;
  std::uint32_t candidate;
  std::uint32_t truth;
};

// Pointwise comparison, ascending node id. Requires equal lengths.
std::vector<Mismatch> verify(const CorenessResult& candidate, const CorenessResult& truth);

}  // namespace kcore
