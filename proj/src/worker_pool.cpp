#include "mrcm/worker_pool.hpp"

#include <atomic>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace mrcm {

namespace {
std::atomic<unsigned> g_workers{0};
}

void set_worker_count(unsigned n) { g_workers.store(n); }

unsigned worker_count() {
  unsigned n = g_workers.load();
  if (n == 0) n = std::thread::hardware_concurrency();
  return n == 0 ? 1 : n;
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn) {
  const unsigned workers = worker_count();
  if (n == 0) return;
  if (workers <= 1 || n == 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }

  std::atomic<std::size_t> next{0};
  std::exception_ptr first_error;
  std::mutex error_mutex;

  auto body = [&]() {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= n) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
      }
    }
  };

  std::vector<std::thread> threads;
  const unsigned spawn = static_cast<unsigned>(
      std::min<std::size_t>(workers, n));
  threads.reserve(spawn);
  for (unsigned t = 0; t < spawn; ++t) threads.emplace_back(body);
  for (auto& t : threads) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace mrcm
