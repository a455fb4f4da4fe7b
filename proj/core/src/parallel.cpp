#include "chebmel/parallel.hpp"

#include <atomic>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace chebmel {

namespace {
std::atomic<unsigned> g_default_jobs{0};
}

void set_default_jobs(unsigned jobs) { g_default_jobs.store(jobs); }

unsigned default_jobs() {
  unsigned j = g_default_jobs.load();
  if (j == 0) j = std::thread::hardware_concurrency();
  if (j == 0) j = 1;
  return j;
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body,
                  unsigned jobs) {
  if (n == 0) return;
  unsigned workers = jobs == 0 ? default_jobs() : jobs;
  if (workers > n) workers = static_cast<unsigned>(n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }

  std::atomic<std::size_t> next{0};
  std::exception_ptr first_error;
  std::mutex error_mutex;

  auto run = [&]() {
    for (;;) {
      std::size_t i = next.fetch_add(1);
      if (i >= n) return;
      try {
        body(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
        next.store(n);  // drain remaining work
        return;
      }
    }
  };

  std::vector<std::thread> pool;
  pool.reserve(workers - 1);
  for (unsigned w = 1; w < workers; ++w) pool.emplace_back(run);
  run();
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace chebmel
