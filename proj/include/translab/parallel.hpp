#pragma once

#include <cstddef>
#include <functional>

namespace translab {

// Worker count: TRANSPORT_LAB_THREADS if set, else hardware concurrency.
std::size_t thread_count();

// Runs body(i) for i in [0, n). Each index is visited exactly once; callers
// write only to slot i so results do not depend on scheduling.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace translab
