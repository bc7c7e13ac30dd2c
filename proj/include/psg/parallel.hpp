#pragma once

#include <cstddef>
#include <functional>

namespace psg {

/// Worker count from the PSG_THREADS environment variable (default 1).
std::size_t worker_count();

/// Runs body(i) for i in [0, n). Each index is visited exactly once; callers
/// write only to slots owned by i, so results do not depend on the split.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace psg
