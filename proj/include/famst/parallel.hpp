#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdlib>
#include <exception>
#include <string>
#include <thread>
#include <vector>

namespace famst {

/// Worker count to use when the caller asks for "auto" (0). Honors the
/// FAMST_THREADS environment variable as an upper bound.
inline unsigned resolve_workers(unsigned requested = 0) {
  unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  unsigned n = requested == 0 ? hw : requested;
  if (const char* env = std::getenv("FAMST_THREADS"); env != nullptr && *env != '\0') {
    try {
      long cap = std::stol(env);
      if (cap >= 1) n = std::min<unsigned>(n, static_cast<unsigned>(cap));
    } catch (const std::exception&) {
      // unparsable value: ignore the cap
    }
  }
  return std::max(1u, n);
}

/// Calls fn(begin, end) on contiguous blocks of [0, count) spread over
/// `workers` threads. Blocks are disjoint, so fn may write to per-index slots
/// without synchronization. Runs inline when one worker suffices.
template <class Fn>
void parallel_for_blocks(std::size_t count, unsigned workers, Fn&& fn) {
  if (count == 0) return;
  workers = std::max(1u, workers);
  if (workers == 1 || count < 2 * static_cast<std::size_t>(workers)) {
    fn(std::size_t{0}, count);
    return;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(workers);
  pool.reserve(workers);
  const std::size_t step = (count + workers - 1) / workers;
  for (unsigned w = 0; w < workers; ++w) {
    const std::size_t lo = std::min(count, w * step);
    const std::size_t hi = std::min(count, lo + step);
    if (lo == hi) break;
    pool.emplace_back([&, w, lo, hi] {
      try {
        fn(lo, hi);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace famst
