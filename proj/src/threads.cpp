#include "shiftspec/threads.hpp"

#include <atomic>
#include <thread>
#include <vector>

namespace shiftspec {

namespace {
std::atomic<int> g_max_threads{0};
}

void set_max_threads(int n) { g_max_threads.store(n < 0 ? 0 : n); }

int max_threads() {
  int n = g_max_threads.load();
  if (n > 0) return n;
  unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

void parallel_chunks(std::size_t count, std::size_t chunk_size,
                     const std::function<void(std::size_t, std::size_t)>& fn) {
  if (count == 0) return;
  if (chunk_size == 0) chunk_size = 1;
  const std::size_t n_chunks = (count + chunk_size - 1) / chunk_size;
  const int workers = static_cast<int>(
      std::min<std::size_t>(static_cast<std::size_t>(max_threads()), n_chunks));

  if (workers <= 1) {
    for (std::size_t c = 0; c < n_chunks; ++c)
      fn(c * chunk_size, std::min(count, (c + 1) * chunk_size));
    return;
  }

  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::atomic<bool> failed{false};
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (;;) {
        const std::size_t c = next.fetch_add(1);
        if (c >= n_chunks || failed.load(std::memory_order_relaxed)) return;
        try {
          fn(c * chunk_size, std::min(count, (c + 1) * chunk_size));
        } catch (...) {
          if (!failed.exchange(true)) error = std::current_exception();
          return;
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (failed.load() && error) std::rethrow_exception(error);
}

}  // namespace shiftspec
