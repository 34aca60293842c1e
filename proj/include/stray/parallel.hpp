#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <cstdlib>
#include <exception>
#include <string>
#include <thread>
#include <vector>

namespace stray {

// Worker count: STRAY_WORKERS if set to a positive integer, otherwise the
// hardware concurrency.
inline std::size_t worker_count() {
  if (const char* env = std::getenv("STRAY_WORKERS")) {
    try {
      const long n = std::stol(env);
      if (n > 0) return static_cast<std::size_t>(n);
    } catch (const std::exception&) {
    }
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

// out[i] = f(i) for i in [0, n), evaluated by a pool pulling indices from a
// shared counter. Results land at fixed positions, so the output does not
// depend on scheduling. The first exception thrown by f is rethrown.
template <class F>
auto parallel_map(std::size_t n, F f, std::size_t workers = worker_count()) {
  using R = decltype(f(std::size_t{0}));
  std::vector<R> out(n);
  std::atomic<std::size_t> next{0};
  std::exception_ptr err;
  std::atomic<bool> failed{false};
  auto run = [&] {
    for (std::size_t i; (i = next++) < n && !failed;) {
      try {
        out[i] = f(i);
      } catch (...) {
        if (!failed.exchange(true)) err = std::current_exception();
      }
    }
  };
  workers = std::min(workers, std::max<std::size_t>(n, 1));
  if (workers <= 1) {
    run();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(run);
    for (auto& t : pool) t.join();
  }
  if (err) std::rethrow_exception(err);
  return out;
}

}  // namespace stray
