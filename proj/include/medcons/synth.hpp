#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "medcons/error.hpp"
#include "medcons/graph.hpp"
#include "medcons/partition.hpp"

namespace medcons {

/// Deterministic random source. The engine is std::mt19937_64, whose output
/// sequence is fixed by the C++ standard; the mappings to doubles and bounded
/// integers are defined here rather than by <random> distributions (which are
/// implementation-defined), so results depend only on the seed.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Uniform integer in [0, bound), bound > 0, by rejection.
  std::uint64_t below(std::uint64_t bound) {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    std::uint64_t x;
    do {
      x = engine_();
    } while (x >= limit);
    return x % bound;
  }

  /// Number of failures before the next success of a Bernoulli(p) trial,
  /// 0 < p <= 1.
  std::uint64_t geometric_skip(double p) {
    if (p >= 1.0) return 0;
    const double skip = std::floor(std::log1p(-uniform()) / std::log1p(-p));
    return skip >= 9.0e18 ? UINT64_MAX / 2 : static_cast<std::uint64_t>(skip);
  }

 private:
  std::mt19937_64 engine_;
};

/// SplitMix64 finalizer; used to derive independent per-stream seeds.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

struct PlantedPartitionSpec {
  std::size_t communities = 2;     // q
  std::size_t community_size = 4;  // s
  double p_in = 1.0;
  double p_out = 0.0;
  std::uint64_t seed = 0;

  std::size_t num_vertices() const { return communities * community_size; }
};

struct PlantedInstance {
  Graph graph;
  Partition truth;
};

namespace detail {

// Calls emit(index) for each index in [0, count) kept with probability p,
// skipping geometrically between kept indices.
template <typename Emit>
void sample_indices(Rng& rng, std::uint64_t count, double p, Emit&& emit) {
  if (p <= 0.0 || count == 0) return;
  std::uint64_t idx = rng.geometric_skip(p);
  while (idx < count) {
    emit(idx);
    const std::uint64_t skip = rng.geometric_skip(p);
    if (skip >= count - idx) break;
    idx += skip + 1;
  }
}

}  // namespace detail

/// Equal-block planted partition graph: each pair inside a block is an edge
/// with probability p_in, each pair across blocks with probability p_out.
/// Vertex v belongs to block v / s.
inline PlantedInstance generate_planted(const PlantedPartitionSpec& spec) {
  if (!(spec.p_in >= 0.0 && spec.p_in <= 1.0 && spec.p_out >= 0.0 &&
        spec.p_out <= spec.p_in)) {
    throw RangeError("planted partition needs 0 <= p_out <= p_in <= 1");
  }
  const std::size_t q = spec.communities;
  const std::size_t s = spec.community_size;
  const std::size_t n = spec.num_vertices();
  if (n >= UINT32_MAX) throw SizeError("too many vertices");
  Rng rng(spec.seed);
  std::vector<Edge> edges;
  for (std::size_t a = 0; a < q; ++a) {
    const VertexId base_a = static_cast<VertexId>(a * s);
    const std::uint64_t within = s == 0 ? 0 : static_cast<std::uint64_t>(s) * (s - 1) / 2;
    detail::sample_indices(rng, within, spec.p_in, [&](std::uint64_t idx) {
      // idx enumerates pairs (i, j), i < j, ordered by j then i.
      auto j = static_cast<std::uint64_t>((1.0 + std::sqrt(1.0 + 8.0 * static_cast<double>(idx))) / 2.0);
      while (j * (j - 1) / 2 > idx) --j;
      while ((j + 1) * j / 2 <= idx) ++j;
      const std::uint64_t i = idx - j * (j - 1) / 2;
      edges.emplace_back(base_a + static_cast<VertexId>(i), base_a + static_cast<VertexId>(j));
    });
    for (std::size_t b = a + 1; b < q; ++b) {
      const VertexId base_b = static_cast<VertexId>(b * s);
      detail::sample_indices(rng, static_cast<std::uint64_t>(s) * s, spec.p_out,
                             [&](std::uint64_t idx) {
                               edges.emplace_back(base_a + static_cast<VertexId>(idx / s),
                                                  base_b + static_cast<VertexId>(idx % s));
                             });
    }
  }
  std::vector<ClusterId> truth(n);
  for (std::size_t v = 0; v < n; ++v) truth[v] = static_cast<ClusterId>(s ? v / s : 0);
  return {Graph(n, edges), Partition(truth)};
}

/// Raw labels of `p` after moving each vertex, with probability epsilon, to
/// a uniformly chosen different existing cluster. Label values are those of
/// `p` (not re-canonicalized).
inline std::vector<ClusterId> perturb_labels(const Partition& p, double epsilon,
                                             std::uint64_t seed) {
  if (!(epsilon >= 0.0 && epsilon <= 1.0)) {
    throw RangeError("epsilon must lie in [0, 1]");
  }
  Rng rng(seed);
  const std::size_t b = p.num_clusters();
  std::vector<ClusterId> labels(p.labels().begin(), p.labels().end());
  for (auto& label : labels) {
    const bool flip = rng.uniform() < epsilon;
    if (flip && b > 1) {
      auto other = static_cast<ClusterId>(rng.below(b - 1));
      label = other >= label ? other + 1 : other;
    }
  }
  return labels;
}

inline Partition perturb_partition(const Partition& p, double epsilon, std::uint64_t seed) {
  return Partition(perturb_labels(p, epsilon, seed));
}

/// `count` independent perturbations of `base`; member i uses
/// derive_seed(seed, i).
inline std::vector<Partition> perturbed_ensemble(const Partition& base, std::size_t count,
                                                 double epsilon, std::uint64_t seed) {
  std::vector<Partition> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    out.push_back(perturb_partition(base, epsilon, derive_seed(seed, i)));
  }
  return out;
}

}  // namespace medcons
