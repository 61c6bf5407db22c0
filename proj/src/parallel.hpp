#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdlib>
#include <thread>
#include <vector>

namespace gridshift::detail {

// requested == 0 means "auto": GRIDSHIFT_THREADS if set, else hardware concurrency.
inline std::size_t worker_count(std::size_t requested) {
  std::size_t hw = std::max<std::size_t>(1, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("GRIDSHIFT_THREADS")) {
    const long cap = std::strtol(env, nullptr, 10);
    if (cap > 0) hw = std::min(hw, static_cast<std::size_t>(cap));
  }
  return requested == 0 ? hw : std::min(requested, hw);
}

// Splits [0, n) into contiguous chunks. Runs inline below `grain` items per worker
// so small inputs never pay for thread start-up. `fn(begin, end)` must not throw.
template <class Fn>
void parallel_for(std::size_t n, std::size_t threads, std::size_t grain, Fn&& fn) {
  const std::size_t workers = std::min(threads, grain == 0 ? n : n / grain);
  if (workers <= 1) {
    fn(std::size_t{0}, n);
    return;
  }
  std::vector<std::jthread> pool;
  pool.reserve(workers - 1);
  const std::size_t chunk = (n + workers - 1) / workers;
  for (std::size_t w = 1; w < workers; ++w) {
    const std::size_t b = w * chunk, e = std::min(n, b + chunk);
    if (b < e) pool.emplace_back([&fn, b, e] { fn(b, e); });
  }
  fn(std::size_t{0}, std::min(n, chunk));
}

}  // namespace gridshift::detail
