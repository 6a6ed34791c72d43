#include "surprise/parallel.hpp"

#include <algorithm>
#include <mutex>

namespace surprise {

namespace {
std::atomic<int> g_workers{0};  // 0 = use hardware concurrency
}

int worker_count() {
  const int w = g_workers.load();
  if (w > 0) return w;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

void set_worker_count(int workers) { g_workers.store(workers); }

namespace {

thread_local bool t_in_parallel_region = false;

void run_tasks(std::size_t m, const std::function<void(std::size_t)>& task) {
  if (m == 0) return;
  // Nested regions run serially; the outer level owns the workers.
  const int workers = t_in_parallel_region
                          ? 1
                          : static_cast<int>(std::min<std::size_t>(worker_count(), m));
  if (workers <= 1) {
    for (std::size_t i = 0; i < m; ++i) task(i);
    return;
  }

  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;

  auto work = [&] {
    t_in_parallel_region = true;
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= m) {
        t_in_parallel_region = false;
        return;
      }
      try {
        task(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
        t_in_parallel_region = false;
        return;
      }
    }
  };

  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers) - 1);
  for (int i = 1; i < workers; ++i) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace

void for_chunks(std::size_t n,
                const std::function<void(std::size_t, std::size_t, std::size_t)>& fn) {
  const std::size_t m = chunk_count(n);
  run_tasks(m, [&](std::size_t ci) {
    fn(ci, ci * kChunkSize, std::min(n, (ci + 1) * kChunkSize));
  });
}

void for_indices(std::size_t n, const std::function<void(std::size_t)>& fn) {
  run_tasks(n, fn);
}

}  // namespace surprise
