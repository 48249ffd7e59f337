#pragma once

#include <cstddef>
#include <functional>

namespace thirdq {

// Runs body(i) for i in [0, count) on up to `workers` threads. Each index runs exactly once;
// the exception of the lowest failing index is rethrown after all threads join.
void parallel_for(std::size_t count, int workers, const std::function<void(std::size_t)>& body);

}  // namespace thirdq
