#pragma once

#include <atomic>
#include <cstddef>
#include <exception>
#include <functional>
#include <thread>
#include <vector>

namespace surprise {

/// Rows per work chunk. Fixed so that chunk boundaries (and therefore
/// per-chunk RNG substreams and reduction order) never depend on the
/// worker count.
constexpr std::size_t kChunkSize = 16384;

int worker_count();
void set_worker_count(int workers);

inline std::size_t chunk_count(std::size_t n) {
  return n == 0 ? 0 : (n - 1) / kChunkSize + 1;
}

/**
 * Runs fn(chunk_index, begin, end) over the fixed chunk grid of [0, n).
 * Chunks are claimed from an atomic counter by worker_count() threads;
 * any exception is rethrown on the calling thread.
 */
void for_chunks(std::size_t n,
                const std::function<void(std::size_t, std::size_t, std::size_t)>& fn);

/**
 * Runs fn(i) for each i in [0, n), one task per index (for replication
 * loops). Each task must write only to its own slot; aggregate afterwards
 * in index order for worker-count-independent results.
 */
void for_indices(std::size_t n, const std::function<void(std::size_t)>& fn);

/**
 * Deterministic parallel reduction: per-chunk partials are produced in
 * parallel and merged sequentially in chunk order, so the result is
 * identical for every worker count.
 */
template <typename Partial, typename ChunkFn, typename MergeFn>
Partial reduce_chunks(std::size_t n, Partial init, ChunkFn chunk_fn, MergeFn merge_fn) {
  const std::size_t m = chunk_count(n);
  std::vector<Partial> partials(m, init);
  for_chunks(n, [&](std::size_t ci, std::size_t lo, std::size_t hi) {
    partials[ci] = chunk_fn(ci, lo, hi);
  });
  Partial acc = init;
  for (std::size_t ci = 0; ci < m; ++ci) acc = merge_fn(std::move(acc), partials[ci]);
  return acc;
}

}  // namespace surprise
