#include "coarselab/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace coarselab {
namespace {

std::atomic<std::size_t> g_override{0};

std::size_t env_threads() {
  static const std::size_t value = [] {
    std::size_t n = std::max(1u, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("COARSELAB_THREADS")) {
      try {
        long v = std::stol(env);
        if (v > 0) n = static_cast<std::size_t>(v);
      } catch (...) {
      }
    }
    return n;
  }();
  return value;
}

}  // namespace

std::size_t thread_count() {
  std::size_t o = g_override.load();
  return o ? o : env_threads();
}

void set_thread_count(std::size_t n) { g_override.store(n); }

std::size_t chunk_count(std::size_t n) {
  if (n == 0) return 0;
  return std::min(n, thread_count() * 4);
}

void parallel_chunks(std::size_t n,
                     const std::function<void(std::size_t, std::size_t, std::size_t)>& body) {
  const std::size_t chunks = chunk_count(n);
  if (chunks == 0) return;
  auto bounds = [&](std::size_t c) { return std::make_pair(c * n / chunks, (c + 1) * n / chunks); };
  const std::size_t workers = std::min(thread_count(), chunks);
  if (workers <= 1) {
    for (std::size_t c = 0; c < chunks; ++c) {
      auto [b, e] = bounds(c);
      body(c, b, e);
    }
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t c = next++; c < chunks; c = next++) {
        try {
          auto [b, e] = bounds(c);
          body(c, b, e);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!error) error = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace coarselab
