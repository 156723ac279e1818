#pragma once

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <functional>
#include <thread>
#include <vector>

namespace cdk {

/// Worker count: CDK_LAB_THREADS caps (and can raise) the default of
/// min(hardware, 4). Results are always gathered in index order, so the
/// thread count never changes any output.
inline int worker_count() {
  int hw = static_cast<int>(std::thread::hardware_concurrency());
  int def = std::max(1, std::min(hw, 4));
  if (const char* env = std::getenv("CDK_LAB_THREADS")) {
    char* end = nullptr;
    long v = std::strtol(env, &end, 10);
    if (end != env && v >= 1 && v <= 256) return static_cast<int>(v);
  }
  return def;
}

/// Evaluates fn(i) for i in [0, count) and returns results in index order.
template <class R>
std::vector<R> parallel_map_indexed(std::size_t count, const std::function<R(std::size_t)>& fn) {
  std::vector<R> out(count);
  int threads = std::min<std::size_t>(worker_count(), count ? count : 1);
  if (threads <= 1) {
    for (std::size_t i = 0; i < count; ++i) out[i] = fn(i);
    return out;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (int w = 0; w < threads; ++w)
    pool.emplace_back([&] {
      for (std::size_t i = next.fetch_add(1); i < count; i = next.fetch_add(1)) out[i] = fn(i);
    });
  for (auto& t : pool) t.join();
  return out;
}

}  // namespace cdk
