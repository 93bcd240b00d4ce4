#pragma once

#include <cstddef>
#include <functional>

namespace ss2f {

/// Number of workers actually used for a request of `threads` (0 means
/// hardware concurrency) over n items.
int effective_threads(int threads, std::size_t n);

/// Runs body(i) for i in [0, n) on up to `threads` workers. Work items must
/// be independent; each writes only its own outputs, so results do not
/// depend on scheduling. The first exception thrown by any item is
/// rethrown after all workers finish.
void parallel_for(std::size_t n, int threads,
                  const std::function<void(std::size_t)>& body);

}  // namespace ss2f
