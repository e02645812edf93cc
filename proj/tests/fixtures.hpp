#pragma once

#include <vector>

#include "medcons/graph.hpp"
#include "medcons/partition.hpp"

namespace medcons::testing {

// Twelve vertices, four partitions. Rows are chosen so that
// delta(v0,v1) = 1, delta(v0,v4) = 0 and delta(v3,v9) = 2.
inline std::vector<Partition> twelve_vertex_ensemble() {
  const std::vector<std::vector<std::uint32_t>> rows = {
      {0, 0, 0, 0}, {0, 0, 0, 1}, {0, 1, 1, 1}, {0, 0, 1, 1},
      {0, 0, 0, 0}, {1, 1, 1, 1}, {0, 1, 0, 1}, {1, 1, 0, 1},
      {2, 2, 2, 2}, {1, 1, 1, 1}, {2, 2, 2, 2}, {2, 2, 2, 2},
  };
  std::vector<Partition> parts;
  for (std::size_t j = 0; j < 4; ++j) {
    std::vector<std::uint32_t> col;
    for (const auto& r : rows) col.push_back(r[j]);
    parts.emplace_back(col);
  }
  return parts;
}

// Graph on the twelve vertices; v3's neighbors (1, 5, 6) lie in clusters
// c2, c1 and c3 of twelve_vertex_consensus(), none in c4.
inline Graph twelve_vertex_graph() {
  const std::vector<Edge> edges = {{3, 1}, {3, 5}, {3, 6}, {0, 1}, {1, 2}, {0, 4},
                                   {2, 4}, {6, 7}, {8, 9}, {9, 10}, {10, 11}, {5, 9}};
  return Graph(12, edges);
}

// c1 = {3, 5}, c2 = {0, 1, 2, 4}, c3 = {6, 7}, c4 = {8, 9, 10, 11}.
inline Partition twelve_vertex_consensus() {
  return Partition({2, 2, 2, 1, 2, 1, 3, 3, 4, 4, 4, 4});
}

}  // namespace medcons::testing

namespace medcons::testing {

// Two families of partitions of 40 vertices. Family A: two halves with one
// vertex moved; family B: ten residue classes mod 10 with one vertex moved.
// Within a family normalized split-join stays <= 0.1; across it is >= 0.6.
inline std::vector<Partition> two_family_ensemble(std::size_t per_family = 5) {
  std::vector<Partition> parts;
  for (std::size_t i = 0; i < per_family; ++i) {
    std::vector<std::uint32_t> labels(40);
    for (std::uint32_t v = 0; v < 40; ++v) labels[v] = v < 20 ? 0 : 1;
    labels[i * 3] ^= 1;
    parts.emplace_back(labels);
  }
  for (std::size_t i = 0; i < per_family; ++i) {
    std::vector<std::uint32_t> labels(40);
    for (std::uint32_t v = 0; v < 40; ++v) labels[v] = v % 10;
    labels[i * 7 + 1] = (labels[i * 7 + 1] + 1) % 10;
    parts.emplace_back(labels);
  }
  return parts;
}

}  // namespace medcons::testing
