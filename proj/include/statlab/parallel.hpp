#pragma once

// Deterministic chunked parallel loops. Work is cut into fixed-size chunks
// independent of the thread count; results come back in chunk order, so
// any in-order merge gives the same answer for every thread count.

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <mutex>
#include <random>
#include <thread>
#include <vector>

namespace statlab {

inline constexpr std::size_t kSampleChunk = 8192;

inline std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Independent generator for chunk `chunk` of a run seeded with `seed`.
inline std::mt19937_64 chunk_rng(std::uint64_t seed, std::uint64_t chunk) {
  return std::mt19937_64(splitmix64(splitmix64(seed) ^ (chunk * 0xd1b54a32d192ed03ULL + 1)));
}

/// 0 means "all cores".
inline std::size_t resolve_threads(std::size_t requested) {
  if (requested > 0) return requested;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

/// Runs fn(chunk, begin, end) over [0, total) in chunks of `chunk_size` and
/// returns the per-chunk results in chunk order. The first exception thrown
/// by any chunk is rethrown after all workers stop.
template <class Fn>
auto parallel_chunks(std::size_t total, std::size_t chunk_size, std::size_t threads, Fn&& fn)
    -> std::vector<decltype(fn(std::size_t{}, std::size_t{}, std::size_t{}))> {
  using Result = decltype(fn(std::size_t{}, std::size_t{}, std::size_t{}));
  const std::size_t chunks = chunk_size == 0 ? 0 : (total + chunk_size - 1) / chunk_size;
  std::vector<Result> results(chunks);
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  std::mutex error_mutex;

  auto worker = [&] {
    for (;;) {
      const std::size_t c = next.fetch_add(1);
      if (c >= chunks || failed.load()) return;
      const std::size_t begin = c * chunk_size;
      const std::size_t end = std::min(total, begin + chunk_size);
      try {
        results[c] = fn(c, begin, end);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
        failed.store(true);
        return;
      }
    }
  };

  const std::size_t nthreads = std::min(resolve_threads(threads), std::max<std::size_t>(chunks, 1));
  if (nthreads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(nthreads);
    for (std::size_t t = 0; t < nthreads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (error) std::rethrow_exception(error);
  return results;
}

/// One task per item, results in item order.
template <class Fn>
auto parallel_map(std::size_t count, std::size_t threads, Fn&& fn) {
  return parallel_chunks(count, 1, threads, [&](std::size_t, std::size_t begin, std::size_t) { return fn(begin); });
}

}  // namespace statlab
