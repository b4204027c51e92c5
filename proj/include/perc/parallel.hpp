#pragma once

#include <cstdint>
#include <cstdlib>
#include <thread>
#include <vector>

namespace perc {

// Worker count: explicit request, else PERC_THREADS, else hardware. Results of
// every parallel loop in this project are independent of the value.
inline int resolve_threads(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("PERC_THREADS")) {
    int v = std::atoi(env);
    if (v > 0) return v;
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

// Splits [begin, end) into per-worker contiguous ranges and runs
// fn(worker_index, range_begin, range_end) on each.
template <class Fn>
void parallel_ranges(std::uint64_t begin, std::uint64_t end, int threads, Fn&& fn) {
  std::uint64_t total = end > begin ? end - begin : 0;
  if (total == 0) return;
  auto workers = static_cast<std::uint64_t>(threads < 1 ? 1 : threads);
  if (workers > total) workers = total;
  if (workers == 1) {
    fn(0, begin, end);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  std::uint64_t chunk = total / workers;
  std::uint64_t extra = total % workers;
  std::uint64_t at = begin;
  for (std::uint64_t w = 0; w < workers; ++w) {
    std::uint64_t len = chunk + (w < extra ? 1 : 0);
    std::uint64_t b = at;
    std::uint64_t e = at + len;
    at = e;
    pool.emplace_back([&fn, w, b, e] { fn(static_cast<int>(w), b, e); });
  }
  for (auto& t : pool) t.join();
}

}  // namespace perc
