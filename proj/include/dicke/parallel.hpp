#pragma once

#include <cstddef>
#include <functional>

namespace dicke {

/// Worker pool size: DICKE_THREADS environment variable if set (>=1),
/// otherwise the hardware concurrency capped at 8.
std::size_t worker_count();

/// Run fn(i) for i in [0, n). Iterations must be independent; results are
/// deterministic because every index writes only its own output slots.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

} // namespace dicke
