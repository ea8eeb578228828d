#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace renergy {

// Trials are cut into fixed-size blocks independent of the worker count; each
// block's tally is stored and merged in block order. Results are therefore
// bit-identical for any number of workers.
inline constexpr std::uint64_t kTrialBlock = 256;

template <typename Tally, typename BlockFn>
Tally run_blocks(std::uint64_t n_trials, int workers, BlockFn&& block_fn) {
  const std::uint64_t n_blocks = (n_trials + kTrialBlock - 1) / kTrialBlock;
  std::vector<Tally> parts(n_blocks);
  std::atomic<std::uint64_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;

  auto work = [&] {
    for (;;) {
      const std::uint64_t b = next.fetch_add(1);
      if (b >= n_blocks) return;
      try {
        const std::uint64_t begin = b * kTrialBlock;
        parts[b] = block_fn(begin, std::min(n_trials, begin + kTrialBlock));
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
        next = n_blocks;
      }
    }
  };

  const int n_threads = static_cast<int>(std::min<std::uint64_t>(std::max(workers, 1), std::max<std::uint64_t>(n_blocks, 1)));
  if (n_threads <= 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(static_cast<std::size_t>(n_threads));
    for (int t = 0; t < n_threads; ++t) pool.emplace_back(work);
  }
  if (error) std::rethrow_exception(error);

  Tally total{};
  for (const auto& part : parts) total.merge(part);
  return total;
}

}  // namespace renergy
