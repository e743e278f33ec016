#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "erwlab/errors.hpp"

namespace erwlab {

// Worker count: explicit value if positive, else ERWLAB_THREADS, else the
// hardware concurrency.
inline unsigned resolve_threads(int requested) {
  if (requested > 0) return static_cast<unsigned>(requested);
  if (const char* env = std::getenv("ERWLAB_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<unsigned>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

// Runs body(i) for i in [0, count) on up to `threads` workers. Results must be
// written by index; execution order is unspecified. If any call throws, the
// failure with the lowest index is rethrown, prefixed with that index.
template <class Body>
void parallel_for(std::int64_t count, unsigned threads, Body&& body) {
  if (count <= 0) return;
  std::atomic<std::int64_t> next{0};
  std::mutex fail_mu;
  std::int64_t fail_index = -1;
  std::exception_ptr fail;
  const auto worker = [&] {
    while (true) {
      const std::int64_t i = next.fetch_add(1, std::memory_order_relaxed);
      if (i >= count) return;
      try {
        body(i);
      } catch (...) {
        std::lock_guard lock(fail_mu);
        if (fail_index < 0 || i < fail_index) fail_index = i, fail = std::current_exception();
      }
    }
  };
  const unsigned n_workers = static_cast<unsigned>(std::min<std::int64_t>(std::max(1u, threads), count));
  if (n_workers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(n_workers);
    for (unsigned w = 0; w < n_workers; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (fail) {
    try {
      std::rethrow_exception(fail);
    } catch (const Error& e) {
      throw Error("replica " + std::to_string(fail_index) + ": " + e.what(), e.code());
    } catch (const std::bad_alloc&) {
      throw BudgetError("replica " + std::to_string(fail_index) + ": out of memory");
    }
  }
}

}  // namespace erwlab
