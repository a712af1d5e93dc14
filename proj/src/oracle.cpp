#include "kcore/oracle.hpp"

#include <algorithm>
#include <cassert>

namespace kcore {

CorenessResult make_coreness_result(std::vector<std::uint32_t> coreness) {
  CorenessResult r;
  r.coreness = std::move(coreness);
  std::uint64_t sum = 0;
  for (std::uint32_t c : r.coreness) {
    r.k_max = std::max(r.k_max, c);
    sum += c;
  }
  r.k_avg = r.coreness.empty() ? 0.0
                               : static_cast<double>(sum) / static_cast<double>(r.coreness.size());
  return r;
}

CorenessResult peel_coreness(const Graph& g) {
  const std::uint32_t n = g.node_count();
  std::vector<std::uint32_t> core(n);
  if (n == 0) return make_coreness_result(std::move(core));

  std::uint32_t max_deg = 0;
  for (NodeId u = 0; u < n; ++u) {
    core[u] = g.degree(u);
    max_deg = std::max(max_deg, core[u]);
  }

  // Counting sort of nodes by degree: bin[d] = start of degree-d block.
  std::vector<std::uint32_t> bin(max_deg + 2, 0);
  for (NodeId u = 0; u < n; ++u) ++bin[core[u] + 1];
  for (std::uint32_t d = 1; d <= max_deg + 1; ++d) bin[d] += bin[d - 1];

  std::vector<NodeId> vert(n);   // nodes ordered by current degree
  std::vector<std::uint32_t> pos(n);  // inverse of vert
  {
    std::vector<std::uint32_t> next(bin.begin(), bin.end() - 1);
    for (NodeId u = 0; u < n; ++u) {  // ascending id within each degree block
      pos[u] = next[core[u]]++;
      vert[pos[u]] = u;
    }
  }

  for (std::uint32_t i = 0; i < n; ++i) {
    NodeId v = vert[i];
    for (NodeId u : g.neighbors(v)) {
      if (core[u] <= core[v]) continue;
      // Swap u to the front of its degree block, then shrink the block.
      std::uint32_t du = core[u];
      std::uint32_t pu = pos[u];
      std::uint32_t pw = bin[du];
      NodeId w = vert[pw];
      if (u != w) {
        std::swap(vert[pu], vert[pw]);
        pos[u] = pw;
        pos[w] = pu;
      }
      ++bin[du];
      --core[u];
    }
  }
  return make_coreness_result(std::move(core));
}

std::vector<Mismatch> verify(const CorenessResult& candidate, const CorenessResult& truth) {
  assert(candidate.coreness.size() == truth.coreness.size());
  std::vector<Mismatch> out;
  for (std::size_t u = 0; u < truth.coreness.size(); ++u)
    if (candidate.coreness[u] != truth.coreness[u])
      out.push_back({static_cast<NodeId>(u), candidate.coreness[u], truth.coreness[u]});
  return out;
}

}  // namespace kcore
