#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <mutex>
#include <span>
#include <thread>
#include <vector>

namespace medcons {

/// Splits [0, costs.size()) into at most `parts` contiguous ranges of roughly
/// equal summed cost. Returns part boundaries (first = 0, last = size).
inline std::vector<std::size_t> balanced_ranges(std::span<const std::uint64_t> costs,
                                                std::size_t parts) {
  const std::size_t n = costs.size();
  parts = std::max<std::size_t>(1, std::min(parts, std::max<std::size_t>(n, 1)));
  std::uint64_t total = 0;
  for (auto c : costs) total += c;
  std::vector<std::size_t> bounds{0};
  std::uint64_t running = 0;
  std::size_t i = 0;
  for (std::size_t part = 1; part < parts; ++part) {
    const std::uint64_t target = total / parts * part + (total % parts) * part / parts;
    while (i < n && running < target) running += costs[i++];
    bounds.push_back(i);
  }
  bounds.push_back(n);
  return bounds;
}

/// Runs body(part, begin, end) over the given ranges, one worker thread per range.
/// The calling thread executes the first range. Exceptions from workers are
/// rethrown after all threads join.
template <typename Body>
void run_ranges(std::span<const std::size_t> bounds, Body&& body) {
  const std::size_t parts = bounds.size() - 1;
  if (parts <= 1) {
    if (parts == 1) body(std::size_t{0}, bounds[0], bounds[1]);
    return;
  }
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto guarded = [&](std::size_t p) {
    try {
      body(p, bounds[p], bounds[p + 1]);
    } catch (...) {
      std::lock_guard lock(failure_mutex);
      if (!failure) failure = std::current_exception();
    }
  };
  {
    std::vector<std::jthread> threads;
    threads.reserve(parts - 1);
    for (std::size_t p = 1; p < parts; ++p) threads.emplace_back(guarded, p);
    guarded(0);
  }
  if (failure) std::rethrow_exception(failure);
}

/// Uniform-cost parallel loop over [0, n).
template <typename Body>
void parallel_for(std::size_t n, std::size_t workers, Body&& body) {
  workers = std::max<std::size_t>(1, std::min(workers, std::max<std::size_t>(n, 1)));
  std::vector<std::size_t> bounds;
  for (std::size_t w = 0; w <= workers; ++w) bounds.push_back(n * w / workers);
  run_ranges(bounds, [&](std::size_t, std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) body(i);
  });
}

}  // namespace medcons
