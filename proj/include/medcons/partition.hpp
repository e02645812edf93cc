#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <istream>
#include <ostream>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "medcons/detail/text.hpp"
#include "medcons/error.hpp"
#include "medcons/graph.hpp"

namespace medcons {

using ClusterId = std::uint32_t;

/// A complete, non-overlapping assignment of n vertices to clusters.
///
/// Labels are always canonical: renumbered 0..b-1 in order of first
/// appearance, so two partitions compare equal iff they group the vertices
/// identically.
class Partition {
 public:
  Partition() = default;

  template <typename Label>
  explicit Partition(std::span<const Label> labels) {
    assign(labels);
  }

  explicit Partition(const std::vector<std::uint64_t>& labels)
      : Partition(std::span<const std::uint64_t>(labels)) {}
  explicit Partition(const std::vector<ClusterId>& labels)
      : Partition(std::span<const ClusterId>(labels)) {}
  Partition(std::initializer_list<std::uint64_t> labels)
      : Partition(std::vector<std::uint64_t>(labels)) {}

  std::size_t size() const noexcept { return labels_.size(); }
  std::size_t num_clusters() const noexcept { return num_clusters_; }
  std::span<const ClusterId> labels() const noexcept { return labels_; }
  ClusterId operator[](std::size_t v) const { return labels_[v]; }

  /// Member counts indexed by cluster label.
  std::vector<std::size_t> cluster_sizes() const {
    std::vector<std::size_t> sizes(num_clusters_, 0);
    for (ClusterId c : labels_) ++sizes[c];
    return sizes;
  }

  static Partition singletons(std::size_t n) {
    std::vector<ClusterId> labels(n);
    for (std::size_t i = 0; i < n; ++i) labels[i] = static_cast<ClusterId>(i);
    return Partition(labels);
  }

  static Partition single_cluster(std::size_t n) {
    return Partition(std::vector<ClusterId>(n, 0));
  }

  bool operator==(const Partition&) const = default;

 private:
  template <typename Label>
  void assign(std::span<const Label> labels) {
    labels_.resize(labels.size());
    // Dense labels are the common case; fall back to hashing otherwise.
    Label max_label = 0;
    for (Label l : labels) max_label = std::max(max_label, l);
    constexpr ClusterId kUnset = static_cast<ClusterId>(-1);
    if (static_cast<std::uint64_t>(max_label) < 4 * labels.size() + 16) {
      std::vector<ClusterId> remap(static_cast<std::size_t>(max_label) + 1,
                                   kUnset);
      ClusterId next = 0;
      for (std::size_t i = 0; i < labels.size(); ++i) {
        ClusterId& slot = remap[static_cast<std::size_t>(labels[i])];
        if (slot == kUnset) slot = next++;
        labels_[i] = slot;
      }
      num_clusters_ = next;
    } else {
      std::unordered_map<std::uint64_t, ClusterId> remap;
      for (std::size_t i = 0; i < labels.size(); ++i) {
        auto [it, inserted] = remap.try_emplace(
            static_cast<std::uint64_t>(labels[i]),
            static_cast<ClusterId>(remap.size()));
        labels_[i] = it->second;
      }
      num_clusters_ = remap.size();
    }
  }

  std::vector<ClusterId> labels_;
  std::size_t num_clusters_ = 0;
};

inline void check_same_size(const Partition& p, const Partition& q) {
  if (p.size() != q.size()) {
    throw DimensionError("partitions cover " + std::to_string(p.size()) +
                         " and " + std::to_string(q.size()) + " vertices");
  }
}

/// n x k table of cluster labels; row u holds vertex u's cluster in each of
/// the k input partitions. Stored row-major so a row is contiguous.
class MembershipMatrix {
 public:
  explicit MembershipMatrix(std::span<const Partition> parts) {
    if (parts.empty()) throw Error("membership matrix needs k >= 1 partitions");
    n_ = parts.front().size();
    k_ = parts.size();
    for (const auto& p : parts) {
      if (p.size() != n_) {
        throw DimensionError("partition covers " + std::to_string(p.size()) +
                             " vertices, expected " + std::to_string(n_));
      }
    }
    entries_.resize(n_ * k_);
    for (std::size_t j = 0; j < k_; ++j) {
      auto labels = parts[j].labels();
      for (std::size_t u = 0; u < n_; ++u) entries_[u * k_ + j] = labels[u];
    }
  }

  std::size_t num_vertices() const noexcept { return n_; }
  std::size_t num_partitions() const noexcept { return k_; }

  std::span<const ClusterId> row(VertexId u) const noexcept {
    return {entries_.data() + static_cast<std::size_t>(u) * k_, k_};
  }

  ClusterId at(VertexId u, std::size_t j) const {
    if (u >= n_ || j >= k_) throw BoundsError("membership index out of range");
    return entries_[static_cast<std::size_t>(u) * k_ + j];
  }

  Partition column(std::size_t j) const {
    if (j >= k_) throw BoundsError("column out of range");
    std::vector<ClusterId> labels(n_);
    for (std::size_t u = 0; u < n_; ++u) labels[u] = entries_[u * k_ + j];
    return Partition(labels);
  }

  /// Hamming distance of rows u and v: the number of partitions in which
  /// u and v are not co-clustered. No bounds checks.
  int distance_unchecked(VertexId u, VertexId v) const noexcept {
    const ClusterId* a = entries_.data() + static_cast<std::size_t>(u) * k_;
    const ClusterId* b = entries_.data() + static_cast<std::size_t>(v) * k_;
    int d = 0;
    for (std::size_t j = 0; j < k_; ++j) d += a[j] != b[j];
    return d;
  }

 private:
  std::size_t n_ = 0;
  std::size_t k_ = 0;
  std::vector<ClusterId> entries_;
};

inline MembershipMatrix build_membership_matrix(
    std::span<const Partition> parts) {
  return MembershipMatrix(parts);
}

inline int coclustering_distance(const MembershipMatrix& mm, VertexId u,
                                 VertexId v) {
  if (u >= mm.num_vertices() || v >= mm.num_vertices()) {
    throw BoundsError("vertex out of range for membership matrix");
  }
  return mm.distance_unchecked(u, v);
}

namespace detail {

inline std::vector<std::vector<std::uint64_t>> read_label_rows(
    std::istream& in) {
  std::vector<std::vector<std::uint64_t>> rows;
  for_each_data_line(in, [&](std::size_t line_no, const auto& tokens) {
    std::vector<std::uint64_t> row;
    row.reserve(tokens.size());
    for (auto t : tokens) row.push_back(parse_uint(t, line_no));
    rows.push_back(std::move(row));
  });
  return rows;
}

}  // namespace detail

/// Reads a single-column partition file: one label per data line, the line
/// index being the vertex id.
inline Partition load_partition(std::istream& in, std::size_t n) {
  std::vector<std::uint64_t> labels;
  detail::for_each_data_line(in, [&](std::size_t line_no, const auto& tokens) {
    if (tokens.size() != 1) {
      throw ParseError(line_no, "expected one label per line");
    }
    labels.push_back(detail::parse_uint(tokens[0], line_no));
  });
  if (labels.size() != n) {
    throw ValidationError(
        "Input partitions must cover all n vertices (expected " +
        std::to_string(n) + " labels, got " + std::to_string(labels.size()) +
        ")");
  }
  return Partition(labels);
}

/// Reads a single-column partition whose vertex count is the number of
/// data lines.
inline Partition load_partition(std::istream& in) {
  std::vector<std::uint64_t> labels;
  detail::for_each_data_line(in, [&](std::size_t line_no, const auto& tokens) {
    if (tokens.size() != 1) {
      throw ParseError(line_no, "expected one label per line");
    }
    labels.push_back(detail::parse_uint(tokens[0], line_no));
  });
  return Partition(labels);
}

inline void save_partition(const Partition& p, std::ostream& out) {
  for (ClusterId c : p.labels()) out << c << '\n';
  if (!out) throw Error("I/O error while writing partition");
}

/// Reads an ensemble as n rows of k whitespace-separated labels.
inline std::vector<Partition> load_ensemble(std::istream& in) {
  auto rows = detail::read_label_rows(in);
  if (rows.empty()) throw ValidationError("ensemble file has no rows");
  const std::size_t k = rows.front().size();
  std::vector<std::vector<std::uint64_t>> columns(
      k, std::vector<std::uint64_t>(rows.size()));
  for (std::size_t u = 0; u < rows.size(); ++u) {
    if (rows[u].size() != k) {
      throw DimensionError("ensemble row " + std::to_string(u) + " has " +
                           std::to_string(rows[u].size()) +
                           " labels, expected " + std::to_string(k));
    }
    for (std::size_t j = 0; j < k; ++j) columns[j][u] = rows[u][j];
  }
  std::vector<Partition> parts;
  parts.reserve(k);
  for (const auto& col : columns) parts.emplace_back(col);
  return parts;
}

inline void save_ensemble(std::span<const Partition> parts, std::ostream& out) {
  if (parts.empty()) return;
  const std::size_t n = parts.front().size();
  for (const auto& p : parts) check_same_size(p, parts.front());
  for (std::size_t u = 0; u < n; ++u) {
    for (std::size_t j = 0; j < parts.size(); ++j) {
      if (j) out << '\t';
      out << parts[j][u];
    }
    out << '\n';
  }
  if (!out) throw Error("I/O error while writing ensemble");
}

}  // namespace medcons
