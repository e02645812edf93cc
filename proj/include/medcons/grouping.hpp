#pragma once

#include <algorithm>
#include <cstddef>
#include <functional>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "medcons/error.hpp"
#include "medcons/metrics.hpp"
#include "medcons/parallel.hpp"
#include "medcons/partition.hpp"

namespace medcons {

using PartitionDistance = std::function<double(const Partition&, const Partition&)>;

inline double normalized_split_join(const Partition& p, const Partition& q) {
  return split_join(p, q, true);
}

/// Complete graph over ensemble members weighted by a partition distance.
class PartitionDistanceGraph {
 public:
  explicit PartitionDistanceGraph(std::size_t k) : k_(k), weights_(k * k, 0.0) {}

  /// Takes a row-major k x k matrix; must be symmetric with zero diagonal
  /// and entries in [0, 1].
  PartitionDistanceGraph(std::size_t k, std::vector<double> weights)
      : k_(k), weights_(std::move(weights)) {
    if (weights_.size() != k_ * k_) throw DimensionError("weight matrix is not k x k");
    for (std::size_t i = 0; i < k_; ++i) {
      if (weight(i, i) != 0.0) throw ValidationError("non-zero diagonal weight");
      for (std::size_t j = 0; j < k_; ++j) {
        double w = weight(i, j);
        if (w != weight(j, i)) throw ValidationError("weight matrix is not symmetric");
        if (!(w >= 0.0 && w <= 1.0)) throw RangeError("weight outside [0, 1]");
      }
    }
  }

  std::size_t size() const noexcept { return k_; }
  double weight(std::size_t i, std::size_t j) const { return weights_[i * k_ + j]; }

  void set_weight(std::size_t i, std::size_t j, double w) {
    weights_[i * k_ + j] = w;
    weights_[j * k_ + i] = w;
  }

 private:
  std::size_t k_;
  std::vector<double> weights_;
};

inline PartitionDistanceGraph build_distance_graph(
    std::span<const Partition> ensemble,
    const PartitionDistance& distance = normalized_split_join,
    std::size_t workers = 1) {
  if (ensemble.empty()) throw Error("cannot group an empty ensemble");
  for (const auto& p : ensemble) check_same_size(p, ensemble.front());
  const std::size_t k = ensemble.size();
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = i + 1; j < k; ++j) pairs.emplace_back(i, j);
  std::vector<double> values(pairs.size());
  parallel_for(pairs.size(), workers, [&](std::size_t idx) {
    values[idx] = distance(ensemble[pairs[idx].first], ensemble[pairs[idx].second]);
  });
  PartitionDistanceGraph pdg(k);
  for (std::size_t idx = 0; idx < pairs.size(); ++idx) {
    pdg.set_weight(pairs[idx].first, pairs[idx].second, values[idx]);
  }
  return pdg;
}

struct EnsembleGrouping {
  double lambda = 1.0;
  // Each group ascending; groups ordered by their smallest member.
  std::vector<std::vector<std::size_t>> groups;
  std::size_t largest_group = 0;
};

/// Connected components after dropping every edge heavier than lambda.
inline EnsembleGrouping threshold_components(const PartitionDistanceGraph& pdg,
                                             double lambda) {
  if (!(lambda >= 0.0 && lambda <= 1.0)) {
    throw RangeError("lambda must lie in [0, 1], got " + std::to_string(lambda));
  }
  const std::size_t k = pdg.size();
  std::vector<std::size_t> component(k, k);
  EnsembleGrouping result;
  result.lambda = lambda;
  for (std::size_t root = 0; root < k; ++root) {
    if (component[root] != k) continue;
    const std::size_t id = result.groups.size();
    std::vector<std::size_t> members{root};
    component[root] = id;
    for (std::size_t head = 0; head < members.size(); ++head) {
      const std::size_t i = members[head];
      for (std::size_t j = 0; j < k; ++j) {
        if (component[j] == k && pdg.weight(i, j) <= lambda) {
          component[j] = id;
          members.push_back(j);
        }
      }
    }
    std::sort(members.begin(), members.end());
    result.groups.push_back(std::move(members));
  }
  for (std::size_t g = 1; g < result.groups.size(); ++g) {
    if (result.groups[g].size() > result.groups[result.largest_group].size()) {
      result.largest_group = g;
    }
  }
  return result;
}

struct SweepRecord {
  double lambda;
  std::size_t num_groups;
  std::size_t largest_size;
};

/// 1.00, 0.95, ..., 0.05. Each value is i / 20 so that it matches exactly
/// the doubles produced by distance ratios such as 12 / 20.
inline std::vector<double> default_lambda_grid() {
  std::vector<double> grid;
  for (int i = 20; i >= 1; --i) grid.push_back(i / 20.0);
  return grid;
}

inline std::vector<SweepRecord> lambda_sweep(const PartitionDistanceGraph& pdg,
                                             std::span<const double> grid) {
  if (grid.empty()) throw Error("lambda grid is empty");
  std::vector<SweepRecord> sweep;
  sweep.reserve(grid.size());
  for (double lambda : grid) {
    auto grouping = threshold_components(pdg, lambda);
    sweep.push_back({lambda, grouping.groups.size(),
                     grouping.groups.empty()
                         ? 0
                         : grouping.groups[grouping.largest_group].size()});
  }
  return sweep;
}

/// Largest swept lambda at which the ensemble splits into more than one
/// group; 1.0 when it never splits.
inline double select_lambda(std::span<const SweepRecord> sweep) {
  double best = -1.0;
  for (const auto& r : sweep) {
    if (r.num_groups > 1 && r.lambda > best) best = r.lambda;
  }
  return best < 0.0 ? 1.0 : best;
}

}  // namespace medcons
