#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <istream>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "medcons/detail/text.hpp"
#include "medcons/error.hpp"

namespace medcons {

using VertexId = std::uint32_t;
using Edge = std::pair<VertexId, VertexId>;

/// Immutable undirected simple graph in compressed sparse row form.
///
/// Neighbor lists are strictly ascending; both orientations of every edge are
/// stored, so the offsets array ends at 2m.
class Graph {
 public:
  Graph() : offsets_(1, 0) {}

  /// Builds a graph on vertices 0..n-1. Duplicate edges and both orientations
  /// collapse to one undirected edge; self-loops and out-of-range endpoints
  /// are rejected with ValidationError.
  Graph(std::size_t n, std::span<const Edge> edges) : offsets_(n + 1, 0) {
    for (auto [u, v] : edges) {
      if (u == v) {
        throw ValidationError("self-loop on vertex " + std::to_string(u));
      }
      if (u >= n || v >= n) {
        throw ValidationError("edge (" + std::to_string(u) + ", " +
                              std::to_string(v) + ") outside vertex range " +
                              std::to_string(n));
      }
    }
    std::vector<Edge> directed;
    directed.reserve(edges.size() * 2);
    for (auto [u, v] : edges) {
      directed.emplace_back(u, v);
      directed.emplace_back(v, u);
    }
    std::sort(directed.begin(), directed.end());
    directed.erase(std::unique(directed.begin(), directed.end()),
                   directed.end());
    adjacency_.reserve(directed.size());
    for (auto [u, v] : directed) {
      ++offsets_[u + 1];
      adjacency_.push_back(v);
    }
    for (std::size_t i = 0; i < n; ++i) offsets_[i + 1] += offsets_[i];
  }

  std::size_t num_vertices() const noexcept { return offsets_.size() - 1; }
  std::size_t num_edges() const noexcept { return adjacency_.size() / 2; }

  std::span<const VertexId> neighbors(VertexId v) const {
    if (v >= num_vertices()) {
      throw BoundsError("vertex " + std::to_string(v) + " out of range [0, " +
                        std::to_string(num_vertices()) + ")");
    }
    return neighbors_unchecked(v);
  }

  std::span<const VertexId> neighbors_unchecked(VertexId v) const noexcept {
    return {adjacency_.data() + offsets_[v],
            adjacency_.data() + offsets_[v + 1]};
  }

  std::size_t degree(VertexId v) const { return neighbors(v).size(); }

  /// Each undirected edge once, as (u, v) with u < v, in ascending order.
  std::vector<Edge> edges() const {
    std::vector<Edge> out;
    out.reserve(num_edges());
    for (VertexId u = 0; u < num_vertices(); ++u) {
      for (VertexId v : neighbors_unchecked(u)) {
        if (u < v) out.emplace_back(u, v);
      }
    }
    return out;
  }

  bool operator==(const Graph&) const = default;

 private:
  std::vector<std::size_t> offsets_;
  std::vector<VertexId> adjacency_;
};

inline std::vector<VertexId> neighbors(const Graph& g, VertexId v) {
  auto span = g.neighbors(v);
  return {span.begin(), span.end()};
}

/// Reads a whitespace-separated "u v" edge list. '#' lines are comments.
/// Without `n`, the vertex count is one past the largest id seen.
inline Graph load_edge_list(std::istream& in,
                            std::optional<std::size_t> n = std::nullopt) {
  std::vector<Edge> edges;
  std::uint64_t max_id = 0;
  bool any = false;
  detail::for_each_data_line(in, [&](std::size_t line_no, const auto& tokens) {
    if (tokens.size() != 2) {
      throw ParseError(line_no, "expected exactly two vertex ids, got " +
                                    std::to_string(tokens.size()) + " fields");
    }
    std::uint64_t u = detail::parse_uint(tokens[0], line_no);
    std::uint64_t v = detail::parse_uint(tokens[1], line_no);
    if (u > UINT32_MAX - 1 || v > UINT32_MAX - 1) {
      throw ParseError(line_no, "vertex id too large");
    }
    if (u == v) {
      throw ValidationError("line " + std::to_string(line_no) +
                            ": self-loop on vertex " + std::to_string(u));
    }
    max_id = std::max({max_id, u, v});
    any = true;
    edges.emplace_back(static_cast<VertexId>(u), static_cast<VertexId>(v));
  });
  std::size_t count = 0;
  if (n) {
    count = *n;
  } else if (any) {
    count = static_cast<std::size_t>(max_id) + 1;
  } else {
    throw ValidationError("empty edge list and no vertex count given");
  }
  return Graph(count, edges);
}

inline void save_edge_list(const Graph& g, std::ostream& out) {
  for (auto [u, v] : g.edges()) out << u << ' ' << v << '\n';
  if (!out) throw Error("I/O error while writing edge list");
}

}  // namespace medcons
