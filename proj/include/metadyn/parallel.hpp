#pragma once

#include <cstddef>
#include <functional>

namespace metadyn {

/// Worker count from METADYN_THREADS; unset, unparsable or 0 means serial.
int threads_from_env();

/// Runs fn(i) for i in [0, n). With threads <= 1 the loop is serial; otherwise
/// indices are split into contiguous blocks, one per worker. fn must only
/// write to per-index state.
void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& fn);

}  // namespace metadyn
