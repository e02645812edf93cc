#pragma once

#include <cstddef>
#include <cstdint>
#include <iterator>
#include <limits>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "medcons/error.hpp"
#include "medcons/metrics.hpp"
#include "medcons/partition.hpp"

namespace medcons {

inline constexpr std::size_t kDefaultSmallInstanceCap = 2000;

/// Dense n x n table of k - 2*delta_uv. Quadratic memory, so construction is
/// refused above a size cap.
class AgreementMatrix {
 public:
  AgreementMatrix(std::span<const Partition> ensemble,
                  std::size_t cap = kDefaultSmallInstanceCap) {
    MembershipMatrix mm(ensemble);
    n_ = mm.num_vertices();
    if (n_ > cap) {
      throw SizeError("agreement matrix limited to " + std::to_string(cap) +
                      " vertices, got " + std::to_string(n_));
    }
    k_ = mm.num_partitions();
    values_.assign(n_ * n_, 0);
    const int k = static_cast<int>(k_);
    for (std::size_t u = 0; u < n_; ++u) {
      for (std::size_t v = u + 1; v < n_; ++v) {
        const int a = k - 2 * mm.distance_unchecked(static_cast<VertexId>(u),
                                                    static_cast<VertexId>(v));
        values_[u * n_ + v] = a;
        values_[v * n_ + u] = a;
      }
    }
  }

  std::size_t size() const noexcept { return n_; }
  std::size_t num_partitions() const noexcept { return k_; }
  // Diagonal reads 0.
  int operator()(std::size_t u, std::size_t v) const noexcept { return values_[u * n_ + v]; }

 private:
  std::size_t n_ = 0;
  std::size_t k_ = 0;
  std::vector<int> values_;
};

struct BoemConfig {
  std::size_t size_cap = kDefaultSmallInstanceCap;
  std::size_t max_moves = std::numeric_limits<std::size_t>::max();
};

struct BoemResult {
  Partition partition;
  std::vector<std::int64_t> move_deltas;  // one per applied move, all < 0
  bool converged = false;
};

/// Best-one-element-move descent without graph structure: from singletons,
/// repeatedly applies the single move over all (vertex, non-empty cluster)
/// pairs with the lowest delta until none is negative. Ties go to the lowest
/// vertex, then the lowest cluster id. Moves into empty clusters are not
/// considered.
inline BoemResult boem_run(std::span<const Partition> ensemble, const BoemConfig& config = {}) {
  const AgreementMatrix agree(ensemble, config.size_cap);
  const std::size_t n = agree.size();
  std::vector<ClusterId> assignment(n);
  std::vector<std::size_t> sizes(n, 1);
  // affinity[v * n + c] = sum over u in c, u != v, of agree(v, u).
  std::vector<std::int64_t> affinity(n * n, 0);
  for (std::size_t v = 0; v < n; ++v) {
    assignment[v] = static_cast<ClusterId>(v);
    for (std::size_t u = 0; u < n; ++u) affinity[v * n + u] = agree(v, u);
  }

  BoemResult result;
  while (result.move_deltas.size() < config.max_moves) {
    std::int64_t best_delta = 0;
    std::size_t best_v = n, best_c = n;
    for (std::size_t v = 0; v < n; ++v) {
      const std::size_t src = assignment[v];
      const std::int64_t stay = affinity[v * n + src];
      for (std::size_t c = 0; c < n; ++c) {
        if (c == src || sizes[c] == 0) continue;
        const std::int64_t delta = stay - affinity[v * n + c];
        if (delta < best_delta) {
          best_delta = delta;
          best_v = v;
          best_c = c;
        }
      }
    }
    if (best_v == n) {
      result.converged = true;
      break;
    }
    const std::size_t from = assignment[best_v];
    for (std::size_t v = 0; v < n; ++v) {
      const int a = agree(v, best_v);
      affinity[v * n + from] -= a;
      affinity[v * n + best_c] += a;
    }
    --sizes[from];
    ++sizes[best_c];
    assignment[best_v] = static_cast<ClusterId>(best_c);
    result.move_deltas.push_back(best_delta);
  }
  result.partition = Partition(assignment);
  return result;
}

inline constexpr std::size_t kMaxEnumerationSize = 12;

/// All set partitions of {0..n-1}, each exactly once, as restricted growth
/// strings in lexicographic order.
class SetPartitions {
 public:
  explicit SetPartitions(std::size_t n) : n_(n) {
    if (n > kMaxEnumerationSize) {
      throw SizeError("set partition enumeration limited to n <= " +
                      std::to_string(kMaxEnumerationSize));
    }
  }

  class iterator {
   public:
    using iterator_category = std::input_iterator_tag;
    using value_type = Partition;
    using difference_type = std::ptrdiff_t;
    using pointer = const Partition*;
    using reference = const Partition&;

    iterator() = default;
    explicit iterator(std::size_t n)
        : rgs_(n, 0), prefix_max_(n, 0), current_(Partition(rgs_)), done_(false) {}

    reference operator*() const { return current_; }
    pointer operator->() const { return &current_; }

    iterator& operator++() {
      advance();
      return *this;
    }
    void operator++(int) { advance(); }

    bool operator==(const iterator& other) const {
      return done_ == other.done_ && (done_ || rgs_ == other.rgs_);
    }

   private:
    // rgs[i] <= 1 + max(rgs[0..i-1]); increment the rightmost position that
    // can grow and reset everything after it.
    void advance() {
      const std::size_t n = rgs_.size();
      std::size_t i = n;
      while (i > 1) {
        --i;
        if (rgs_[i] <= prefix_max_[i - 1]) {
          ++rgs_[i];
          prefix_max_[i] = std::max(prefix_max_[i - 1], rgs_[i]);
          for (std::size_t j = i + 1; j < n; ++j) {
            rgs_[j] = 0;
            prefix_max_[j] = prefix_max_[i];
          }
          current_ = Partition(rgs_);
          return;
        }
      }
      done_ = true;
    }

    std::vector<ClusterId> rgs_;
    std::vector<ClusterId> prefix_max_;
    Partition current_;
    bool done_ = true;
  };

  iterator begin() const { return iterator(n_); }
  iterator end() const { return iterator(); }

 private:
  std::size_t n_;
};

inline SetPartitions enumerate_set_partitions(std::size_t n) { return SetPartitions(n); }

struct ExactConsensus {
  Partition partition;
  std::int64_t optimum;
};

/// Exhaustive minimizer of total Mirkin distance; first optimum in
/// enumeration order wins ties.
inline ExactConsensus exact_consensus(std::span<const Partition> ensemble) {
  if (ensemble.empty()) throw Error("exact consensus needs a non-empty ensemble");
  for (const auto& p : ensemble) check_same_size(p, ensemble.front());
  ExactConsensus best{Partition{}, std::numeric_limits<std::int64_t>::max()};
  for (const Partition& candidate : enumerate_set_partitions(ensemble.front().size())) {
    const std::int64_t value = total_mirkin(candidate, ensemble);
    if (value < best.optimum) best = {candidate, value};
  }
  return best;
}

}  // namespace medcons
