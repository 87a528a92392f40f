#pragma once

#include <cstddef>
#include <functional>

namespace magobs {

/// Worker count used by parallel loops; 0 selects hardware concurrency.
void set_num_threads(unsigned n);
unsigned num_threads();

/// Runs body(i) for i in [0, n). Each index writes only its own output slot,
/// so results do not depend on the worker count. The first exception thrown
/// by any body is rethrown on the calling thread.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace magobs
