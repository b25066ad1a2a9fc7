#ifndef OMNIBUS_PARALLEL_HPP
#define OMNIBUS_PARALLEL_HPP

#include <cstdint>
#include <functional>
#include <thread>
#include <vector>

namespace omnibus {

inline int resolve_threads(int requested) {
  if (requested > 0) return requested;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

// Splits [0, count) into contiguous blocks, one per worker. The body receives
// (begin, end, worker_index). Work items must not depend on which worker runs
// them; all engines here key their randomness on the item index, so the
// partition never affects results.
inline void parallel_blocks(std::int64_t count, int threads,
                            const std::function<void(std::int64_t, std::int64_t, int)>& body) {
  const int workers = std::min<std::int64_t>(resolve_threads(threads), count > 0 ? count : 1);
  if (workers <= 1) {
    body(0, count, 0);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  const std::int64_t chunk = (count + workers - 1) / workers;
  for (int w = 0; w < workers; ++w) {
    const std::int64_t begin = static_cast<std::int64_t>(w) * chunk;
    const std::int64_t end = std::min<std::int64_t>(begin + chunk, count);
    if (begin >= end) break;
    pool.emplace_back([&body, begin, end, w] { body(begin, end, w); });
  }
  for (auto& t : pool) t.join();
}

}  // namespace omnibus

#endif
