#pragma once

#include <functional>

namespace hvi {

/// Worker budget: HVI_THREADS when set and > 0, hardware concurrency
/// otherwise.
int thread_count();

/// Runs fn(begin, end) over a partition of [0, n). Chunk boundaries depend
/// only on n and the worker budget, so per-chunk reductions combine
/// deterministically.
void parallel_for(int n, const std::function<void(int, int)>& fn);

}  // namespace hvi
