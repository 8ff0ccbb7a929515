#include "fioh/common.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <thread>

namespace fioh {

namespace {

int default_threads() {
  if (const char* env = std::getenv("FIOH_THREADS")) {
    int t = std::atoi(env);
    if (t >= 1) return t;
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(std::min(hw, 8u));
}

std::atomic<int> g_threads{0};

}  // namespace

int thread_count() {
  int t = g_threads.load(std::memory_order_relaxed);
  if (t == 0) {
    t = default_threads();
    g_threads.store(t, std::memory_order_relaxed);
  }
  return t;
}

void set_thread_count(int t) { g_threads.store(std::max(1, t)); }

void parallel_chunks(std::size_t count, std::size_t chunk,
                     const std::function<void(std::size_t, std::size_t)>& body) {
  if (count == 0) return;
  chunk = std::max<std::size_t>(1, chunk);
  std::size_t nchunks = (count + chunk - 1) / chunk;
  int threads = std::min<std::size_t>(thread_count(), nchunks);
  if (threads <= 1) {
    for (std::size_t c = 0; c < nchunks; ++c) {
      std::size_t i0 = c * chunk;
      body(i0, std::min(count, i0 + chunk));
    }
    return;
  }
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (;;) {
      std::size_t c = next.fetch_add(1);
      if (c >= nchunks) return;
      std::size_t i0 = c * chunk;
      body(i0, std::min(count, i0 + chunk));
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(threads - 1);
  for (int t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
}

}  // namespace fioh
