#pragma once

#include <cstddef>
#include <functional>

namespace nnm {

/// Worker count for a parallel section. `requested` = 0 means the hardware
/// concurrency; either way NN_MEANING_THREADS, when set, is an upper cap.
std::size_t resolve_workers(std::size_t requested = 0);

/// Runs fn(i) for i in [0, count) on up to `workers` threads, handing out
/// indices dynamically. If any call throws, the exception from the smallest
/// failing index is rethrown after all workers stop.
void parallel_for(std::size_t count, std::size_t workers,
                  const std::function<void(std::size_t)>& fn);

}  // namespace nnm
