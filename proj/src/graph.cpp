#include "kcore/graph.hpp"

#include <zlib.h>

#include <algorithm>
#include <cassert>
#include <cerrno>
#include <charconv>
#include <cstring>
#include <istream>
#include <limits>
#include <ostream>

namespace kcore {

namespace {

bool is_blank(char c) { return c == ' ' || c == '\t' || c == '\r'; }

// Streaming line parser; keeps a carry buffer so chunk boundaries can split
// lines and tokens arbitrarily.
class EdgeListParser {
 public:
  void consume(const char* data, std::size_t len) {
    const char* end = data + len;
    while (data < end) {
      const char* nl = static_cast<const char*>(std::memchr(data, '\n', end - data));
      if (nl == nullptr) {
        carry_.append(data, end);
        break;
      }
      if (carry_.empty()) {
        parse_line(data, nl);
      } else {
        carry_.append(data, nl);
        parse_line(carry_.data(), carry_.data() + carry_.size());
        carry_.clear();
      }
      ++line_;
      data = nl + 1;
    }
  }

  void finish() {
    if (!carry_.empty()) {
      parse_line(carry_.data(), carry_.data() + carry_.size());
      carry_.clear();
    }
  }

  std::vector<std::pair<std::uint64_t, std::uint64_t>>& edges() { return edges_; }

 private:
  std::uint64_t parse_token(const char*& p, const char* end) {
    const char* tok = p;
    while (p < end && !is_blank(*p)) ++p;
    std::uint64_t value = 0;
    auto [ptr, ec] = std::from_chars(tok, p, value);
    if (ec != std::errc() || ptr != p)
      throw ParseError("malformed token '" + std::string(tok, p) + "'", line_);
    return value;
  }

  void parse_line(const char* p, const char* end) {
    while (end > p && is_blank(*(end - 1))) --end;
    while (p < end && is_blank(*p)) ++p;
    if (p == end || *p == '#') return;
    std::uint64_t u = parse_token(p, end);
    while (p < end && is_blank(*p)) ++p;
    if (p == end) throw ParseError("expected two ids, got one", line_);
    std::uint64_t v = parse_token(p, end);
    while (p < end && is_blank(*p)) ++p;
    if (p != end) throw ParseError("expected two ids per line", line_);
    edges_.emplace_back(u, v);
  }

  std::string carry_;
  std::size_t line_ = 1;
  std::vector<std::pair<std::uint64_t, std::uint64_t>> edges_;
};

}  // namespace

// Shared CSR assembly: endpoints already dense, loops/duplicates still present.
Graph build_csr(std::uint32_t n, std::vector<std::pair<NodeId, NodeId>>&& edges,
                std::vector<std::uint64_t>&& original_ids) {
  Graph g;
  g.node_count_ = n;
  g.original_ids_ = std::move(original_ids);
  g.offsets_.assign(static_cast<std::size_t>(n) + 1, 0);
  for (auto [u, v] : edges) {
    if (u == v) continue;
    ++g.offsets_[u + 1];
    ++g.offsets_[v + 1];
  }
  for (std::size_t i = 1; i <= n; ++i) g.offsets_[i] += g.offsets_[i - 1];

  g.neighbors_.resize(g.offsets_[n]);
  std::vector<std::uint64_t> cursor(g.offsets_.begin(), g.offsets_.end() - 1);
  for (auto [u, v] : edges) {
    if (u == v) continue;
    g.neighbors_[cursor[u]++] = v;
    g.neighbors_[cursor[v]++] = u;
  }
  edges.clear();
  edges.shrink_to_fit();

  // Sort each slice and drop duplicates, compacting in place.
  std::uint64_t write = 0;
  std::uint64_t row_start = 0;
  for (std::uint32_t u = 0; u < n; ++u) {
    std::uint64_t row_end = g.offsets_[u + 1];
    std::sort(g.neighbors_.begin() + row_start, g.neighbors_.begin() + row_end);
    std::uint64_t out = write;
    for (std::uint64_t i = row_start; i < row_end; ++i) {
      if (i > row_start && g.neighbors_[i] == g.neighbors_[i - 1]) continue;
      g.neighbors_[out++] = g.neighbors_[i];
    }
    g.offsets_[u] = write;
    row_start = row_end;
    write = out;
  }
  g.offsets_[n] = write;
  g.neighbors_.resize(write);
  g.neighbors_.shrink_to_fit();
  g.edge_count_ = write / 2;
  return g;
}

Graph Graph::from_edges(std::uint32_t node_count,
                        std::span<const std::pair<NodeId, NodeId>> edges) {
  std::vector<std::pair<NodeId, NodeId>> copy(edges.begin(), edges.end());
  for ([[maybe_unused]] auto [u, v] : copy) assert(u < node_count && v < node_count);
  std::vector<std::uint64_t> ids(node_count);
  for (std::uint32_t i = 0; i < node_count; ++i) ids[i] = i;
  return build_csr(node_count, std::move(copy), std::move(ids));
}

namespace {

Graph densify(std::vector<std::pair<std::uint64_t, std::uint64_t>>&& raw) {
  if (raw.empty()) return Graph{};

  std::uint64_t max_id = 0;
  for (auto [u, v] : raw) max_id = std::max({max_id, u, v});

  std::vector<std::uint64_t> ids;  // ascending distinct source ids
  constexpr std::uint64_t kTableSlack = 16;
  if (max_id / kTableSlack <= 2 * raw.size() || max_id < (1u << 20)) {
    std::vector<std::uint8_t> seen(max_id + 1, 0);
    for (auto [u, v] : raw) seen[u] = seen[v] = 1;
    std::uint64_t count = 0;
    for (std::uint8_t s : seen) count += s;
    ids.reserve(count);
    for (std::uint64_t i = 0; i <= max_id; ++i)
      if (seen[i]) ids.push_back(i);
  } else {
    ids.reserve(2 * raw.size());
    for (auto [u, v] : raw) {
      ids.push_back(u);
      ids.push_back(v);
    }
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
    ids.shrink_to_fit();
  }

  if (ids.size() > std::numeric_limits<std::uint32_t>::max())
    throw ParseError("more than 2^32 distinct node ids", 0);
  auto n = static_cast<std::uint32_t>(ids.size());

  auto dense = [&](std::uint64_t id) {
    return static_cast<NodeId>(std::lower_bound(ids.begin(), ids.end(), id) - ids.begin());
  };
  std::vector<std::pair<NodeId, NodeId>> edges;
  edges.reserve(raw.size());
  for (auto [u, v] : raw) edges.emplace_back(dense(u), dense(v));
  raw.clear();
  raw.shrink_to_fit();

  return build_csr(n, std::move(edges), std::move(ids));
}

}  // namespace

Graph load_edge_list(std::istream& in) {
  EdgeListParser parser;
  std::vector<char> buf(1 << 20);
  while (in) {
    in.read(buf.data(), static_cast<std::streamsize>(buf.size()));
    std::streamsize got = in.gcount();
    if (got <= 0) break;
    parser.consume(buf.data(), static_cast<std::size_t>(got));
  }
  if (in.bad()) throw IoError("stream read failed");
  parser.finish();
  return densify(std::move(parser.edges()));
}

Graph load_edge_list_file(const std::string& path) {
  gzFile gz = gzopen(path.c_str(), "rb");  // reads plain files too
  if (gz == nullptr)
    throw IoError("cannot open '" + path + "': " + std::strerror(errno));
  gzbuffer(gz, 1 << 20);

  EdgeListParser parser;
  std::vector<char> buf(1 << 20);
  try {
    for (;;) {
      int got = gzread(gz, buf.data(), static_cast<unsigned>(buf.size()));
      if (got < 0) {
        int errnum = 0;
        const char* msg = gzerror(gz, &errnum);
        throw IoError("error reading '" + path + "': " + msg);
      }
      if (got == 0) break;
      parser.consume(buf.data(), static_cast<std::size_t>(got));
    }
  } catch (...) {
    gzclose(gz);
    throw;
  }
  gzclose(gz);
  parser.finish();
  return densify(std::move(parser.edges()));
}

bool Graph::has_edge(NodeId u, NodeId v) const {
  auto nb = neighbors(u);
  return std::binary_search(nb.begin(), nb.end(), v);
}

void write_edge_list(const Graph& g, std::ostream& out) {
  for (NodeId u = 0; u < g.node_count(); ++u) {
    if (g.degree(u) == 0) {
      out << g.original_id(u) << ' ' << g.original_id(u) << '\n';
      continue;
    }
    for (NodeId v : g.neighbors(u))
      if (u < v) out << g.original_id(u) << ' ' << g.original_id(v) << '\n';
  }
}

}  // namespace kcore
