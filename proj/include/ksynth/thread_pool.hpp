#pragma once

#include <cstddef>
#include <functional>

namespace ksynth {

/// Runs fn(0..count-1) across up to `jobs` worker threads. Exceptions from
/// workers are rethrown on the caller after all workers join. jobs <= 1 runs
/// inline.
void parallel_for(int jobs, std::size_t count, const std::function<void(std::size_t)>& fn);

}  // namespace ksynth
