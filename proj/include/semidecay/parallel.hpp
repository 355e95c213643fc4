#pragma once

#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace semidecay {

/// Deterministic parallel map: the index space is split into contiguous
/// chunks and every result is written to its own slot, so outputs are
/// bit-identical for any worker count. Modules receive this capability
/// from the CLI instead of spawning their own threads.
class WorkerPool {
 public:
  explicit WorkerPool(int workers = 1) : workers_(workers < 1 ? 1 : workers) {}

  int workers() const { return workers_; }

  template <class Fn>
  void parallel_for(std::size_t n, Fn&& fn) const {
    if (n == 0) return;
    const std::size_t nw = std::min<std::size_t>(workers_, n);
    if (nw <= 1) {
      for (std::size_t i = 0; i < n; ++i) fn(i);
      return;
    }
    std::vector<std::thread> threads;
    std::exception_ptr err;
    std::mutex err_mutex;
    const std::size_t chunk = (n + nw - 1) / nw;
    for (std::size_t w = 0; w < nw; ++w) {
      const std::size_t lo = w * chunk;
      const std::size_t hi = std::min(n, lo + chunk);
      if (lo >= hi) break;
      threads.emplace_back([&, lo, hi] {
        try {
          for (std::size_t i = lo; i < hi; ++i) fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(err_mutex);
          if (!err) err = std::current_exception();
        }
      });
    }
    for (auto& t : threads) t.join();
    if (err) std::rethrow_exception(err);
  }

 private:
  int workers_;
};

inline const WorkerPool& serial_pool() {
  static const WorkerPool pool(1);
  return pool;
}

}  // namespace semidecay
