#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "medcons/error.hpp"
#include "medcons/graph.hpp"
#include "medcons/parallel.hpp"
#include "medcons/partition.hpp"

namespace medcons {

/// Mutable consensus clustering during optimization.
///
/// Cluster ids are slots 0..n-1 (one per vertex at initialization). Slots may
/// become empty mid-run; they are dropped when converting to a Partition.
/// live_objective tracks sum over co-clustered pairs u < v of (2*delta_uv - k),
/// which differs from the total Mirkin distance to the ensemble by a constant.
class ConsensusState {
 public:
  ConsensusState() = default;

  static ConsensusState singletons(std::size_t n) {
    ConsensusState s;
    s.assignment_.resize(n);
    s.position_.assign(n, 0);
    s.members_.resize(n);
    for (std::size_t v = 0; v < n; ++v) {
      s.assignment_[v] = static_cast<ClusterId>(v);
      s.members_[v].push_back(static_cast<VertexId>(v));
    }
    return s;
  }

  /// State with the clusters of `p`; live_objective must be supplied by the
  /// caller (see surrogate_objective).
  static ConsensusState from_partition(const Partition& p, std::int64_t objective) {
    ConsensusState s;
    s.assignment_.assign(p.labels().begin(), p.labels().end());
    s.position_.assign(p.size(), 0);
    s.members_.resize(p.size());
    for (std::size_t v = 0; v < p.size(); ++v) {
      auto& m = s.members_[p[v]];
      s.position_[v] = static_cast<std::uint32_t>(m.size());
      m.push_back(static_cast<VertexId>(v));
    }
    s.live_objective_ = objective;
    return s;
  }

  std::size_t num_vertices() const noexcept { return assignment_.size(); }
  std::size_t num_slots() const noexcept { return members_.size(); }
  std::span<const ClusterId> assignment() const noexcept { return assignment_; }
  ClusterId cluster_of(VertexId v) const noexcept { return assignment_[v]; }
  std::span<const VertexId> members(ClusterId c) const noexcept { return members_[c]; }
  std::size_t size(ClusterId c) const noexcept { return members_[c].size(); }
  std::int64_t live_objective() const noexcept { return live_objective_; }

  std::size_t num_nonempty_clusters() const {
    return static_cast<std::size_t>(std::count_if(
        members_.begin(), members_.end(), [](const auto& m) { return !m.empty(); }));
  }

  /// Moves v into `to` and adds `delta` (the exact objective change) to
  /// live_objective.
  void move(VertexId v, ClusterId to, std::int64_t delta) {
    const ClusterId from = assignment_[v];
    auto& src = members_[from];
    const std::uint32_t pos = position_[v];
    src[pos] = src.back();
    position_[src[pos]] = pos;
    src.pop_back();
    auto& dst = members_[to];
    position_[v] = static_cast<std::uint32_t>(dst.size());
    dst.push_back(v);
    assignment_[v] = to;
    live_objective_ += delta;
  }

  Partition to_partition() const { return Partition(assignment_); }

 private:
  std::vector<ClusterId> assignment_;
  std::vector<std::vector<VertexId>> members_;
  std::vector<std::uint32_t> position_;
  std::int64_t live_objective_ = 0;
};

struct MoveProposal {
  VertexId vertex;
  ClusterId from_cluster;
  ClusterId to_cluster;
  std::int64_t delta;

  bool operator==(const MoveProposal&) const = default;
};

inline ConsensusState init_singletons(const Graph& g) {
  return ConsensusState::singletons(g.num_vertices());
}

namespace detail {

// sum over u in cluster c, u != v, of (2*delta_uv - k).
inline std::int64_t cluster_affinity(const ConsensusState& state,
                                     const MembershipMatrix& mm, VertexId v,
                                     ClusterId c) {
  const int k = static_cast<int>(mm.num_partitions());
  std::int64_t sum = 0;
  for (VertexId u : state.members(c)) {
    if (u != v) sum += 2 * mm.distance_unchecked(u, v) - k;
  }
  return sum;
}

inline void check_state(const ConsensusState& state, const MembershipMatrix& mm) {
  if (state.num_vertices() != mm.num_vertices()) {
    throw DimensionError("consensus state has " + std::to_string(state.num_vertices()) +
                         " vertices, membership matrix has " +
                         std::to_string(mm.num_vertices()));
  }
}

}  // namespace detail

/// Exact objective change when v leaves its cluster for `target`.
inline std::int64_t delta_d(const ConsensusState& state, const MembershipMatrix& mm,
                            VertexId v, ClusterId target) {
  detail::check_state(state, mm);
  if (v >= state.num_vertices()) throw BoundsError("vertex out of range");
  if (target >= state.num_slots()) throw BoundsError("cluster id out of range");
  const ClusterId source = state.cluster_of(v);
  if (target == source) throw ContractError("target equals the current cluster");
  return detail::cluster_affinity(state, mm, v, target) -
         detail::cluster_affinity(state, mm, v, source);
}

namespace detail {

// Assumes valid inputs; `scratch` is reused across calls to avoid allocation.
inline std::optional<MoveProposal> best_move_unchecked(const ConsensusState& state,
                                                       const MembershipMatrix& mm,
                                                       const Graph& g, VertexId v,
                                                       std::vector<ClusterId>& scratch) {
  const ClusterId source = state.cluster_of(v);
  scratch.clear();
  for (VertexId u : g.neighbors_unchecked(v)) {
    const ClusterId c = state.cluster_of(u);
    if (c != source) scratch.push_back(c);
  }
  if (scratch.empty()) return std::nullopt;
  std::sort(scratch.begin(), scratch.end());
  scratch.erase(std::unique(scratch.begin(), scratch.end()), scratch.end());

  const std::int64_t leave = cluster_affinity(state, mm, v, source);
  std::optional<MoveProposal> best;
  for (ClusterId c : scratch) {
    const std::int64_t delta = cluster_affinity(state, mm, v, c) - leave;
    // Ascending candidate order makes strict < keep the smallest id on ties.
    if (delta < 0 && (!best || delta < best->delta)) best = MoveProposal{v, source, c, delta};
  }
  return best;
}

}  // namespace detail

/// The improving move for v with the lowest delta among clusters holding at
/// least one neighbor of v, or nullopt when no such move improves.
inline std::optional<MoveProposal> best_move(const ConsensusState& state,
                                             const MembershipMatrix& mm, const Graph& g,
                                             VertexId v) {
  detail::check_state(state, mm);
  if (g.num_vertices() != state.num_vertices()) throw DimensionError("graph size mismatch");
  if (v >= state.num_vertices()) throw BoundsError("vertex out of range");
  std::vector<ClusterId> scratch;
  return detail::best_move_unchecked(state, mm, g, v, scratch);
}

/// Best move of every vertex against the current (frozen) state, ordered by
/// vertex id. Work is split into contiguous vertex ranges of balanced
/// estimated cost, one per worker.
inline std::vector<MoveProposal> compute_iteration_moves(const ConsensusState& state,
                                                         const MembershipMatrix& mm,
                                                         const Graph& g,
                                                         std::size_t workers = 1) {
  detail::check_state(state, mm);
  if (g.num_vertices() != state.num_vertices()) throw DimensionError("graph size mismatch");
  const std::size_t n = state.num_vertices();
  workers = std::max<std::size_t>(workers, 1);

  std::vector<std::size_t> bounds;
  if (workers == 1) {
    bounds = {0, n};
  } else {
    std::vector<std::uint64_t> cost(n);
    parallel_for(n, workers, [&](std::size_t v) {
      std::uint64_t c = state.size(state.cluster_of(static_cast<VertexId>(v))) + 1;
      for (VertexId u : g.neighbors_unchecked(static_cast<VertexId>(v))) {
        c += state.size(state.cluster_of(u)) + 1;
      }
      cost[v] = c;
    });
    bounds = balanced_ranges(cost, workers);
  }

  std::vector<std::vector<MoveProposal>> chunks(bounds.size() - 1);
  run_ranges(bounds, [&](std::size_t chunk, std::size_t begin, std::size_t end) {
    std::vector<ClusterId> scratch;
    auto& out = chunks[chunk];
    for (std::size_t v = begin; v < end; ++v) {
      if (auto move = detail::best_move_unchecked(state, mm, g, static_cast<VertexId>(v), scratch)) {
        out.push_back(*move);
      }
    }
  });

  std::vector<MoveProposal> proposals;
  std::size_t total = 0;
  for (const auto& c : chunks) total += c.size();
  proposals.reserve(total);
  for (const auto& c : chunks) proposals.insert(proposals.end(), c.begin(), c.end());
  return proposals;
}

/// Replays proposals in ascending vertex order against the live state and
/// applies each one whose recomputed delta is still negative. Returns the
/// number of applied moves; live_objective strictly decreases when it is > 0.
inline std::size_t validate_and_apply(ConsensusState& state, const MembershipMatrix& mm,
                                      std::span<const MoveProposal> proposals) {
  detail::check_state(state, mm);
  // A proposal's delta depends only on its source and target clusters, so it
  // stays exact until one of them changes.
  std::vector<bool> touched(state.num_slots(), false);
  std::size_t applied = 0;
  VertexId previous = 0;
  for (std::size_t i = 0; i < proposals.size(); ++i) {
    const auto& p = proposals[i];
    if (i > 0 && p.vertex <= previous) {
      throw ContractError("proposals must be in strictly ascending vertex order");
    }
    previous = p.vertex;
    if (p.vertex >= state.num_vertices() || p.to_cluster >= state.num_slots()) {
      throw BoundsError("proposal out of range");
    }
    const ClusterId from = state.cluster_of(p.vertex);
    if (from == p.to_cluster) continue;
    std::int64_t delta = p.delta;
    if (from != p.from_cluster || touched[from] || touched[p.to_cluster]) {
      delta = detail::cluster_affinity(state, mm, p.vertex, p.to_cluster) -
              detail::cluster_affinity(state, mm, p.vertex, from);
    }
    if (delta < 0) {
      state.move(p.vertex, p.to_cluster, delta);
      touched[from] = true;
      touched[p.to_cluster] = true;
      ++applied;
    }
  }
  return applied;
}

/// Sum over co-clustered pairs u < v of (2*delta_uv - k), from scratch.
inline std::int64_t surrogate_objective(const ConsensusState& state,
                                        const MembershipMatrix& mm) {
  detail::check_state(state, mm);
  const int k = static_cast<int>(mm.num_partitions());
  std::int64_t sum = 0;
  for (ClusterId c = 0; c < state.num_slots(); ++c) {
    auto members = state.members(c);
    for (std::size_t i = 0; i < members.size(); ++i) {
      for (std::size_t j = i + 1; j < members.size(); ++j) {
        sum += 2 * mm.distance_unchecked(members[i], members[j]) - k;
      }
    }
  }
  return sum;
}

/// Total Mirkin distance of the all-singletons partition to the ensemble:
/// the number of co-clustered pairs summed over all members. Adding the
/// surrogate objective of a state gives that state's total Mirkin distance.
inline std::int64_t singleton_total_mirkin(std::span<const Partition> ensemble) {
  std::int64_t total = 0;
  for (const auto& p : ensemble) {
    for (std::size_t s : p.cluster_sizes()) {
      total += static_cast<std::int64_t>(s) * (static_cast<std::int64_t>(s) - 1) / 2;
    }
  }
  return total;
}

struct ConsensusConfig {
  std::size_t max_iterations = 1000;
  std::size_t workers = 1;
};

struct IterationInfo {
  std::size_t iteration;  // 1-based
  std::size_t proposals;
  std::size_t applied;
  std::int64_t objective;  // surrogate after the iteration
};

struct ConsensusResult {
  Partition partition;
  bool converged = false;
  std::vector<IterationInfo> iterations;
  // Total Mirkin distance to the ensemble of the returned partition.
  std::int64_t total_mirkin = 0;
};

using IterationObserver = std::function<void(const IterationInfo&, const ConsensusState&)>;

/// Median consensus of `ensemble` on graph `g`: starts from singletons and
/// repeats propose/validate/apply until an iteration applies no move.
inline ConsensusResult run(const Graph& g, std::span<const Partition> ensemble,
                           const ConsensusConfig& config = {},
                           const IterationObserver& observer = {}) {
  if (ensemble.empty()) throw Error("consensus needs a non-empty ensemble");
  for (const auto& p : ensemble) {
    if (p.size() != g.num_vertices()) {
      throw DimensionError("partition covers " + std::to_string(p.size()) +
                           " vertices, graph has " + std::to_string(g.num_vertices()));
    }
  }
  const MembershipMatrix mm(ensemble);
  ConsensusState state = init_singletons(g);
  ConsensusResult result;
  for (std::size_t it = 1; it <= config.max_iterations; ++it) {
    auto proposals = compute_iteration_moves(state, mm, g, config.workers);
    const std::size_t applied = validate_and_apply(state, mm, proposals);
    IterationInfo info{it, proposals.size(), applied, state.live_objective()};
    result.iterations.push_back(info);
    if (observer) observer(info, state);
    if (applied == 0) {
      result.converged = true;
      break;
    }
  }
  result.partition = state.to_partition();
  result.total_mirkin = singleton_total_mirkin(ensemble) + state.live_objective();
  return result;
}

}  // namespace medcons
