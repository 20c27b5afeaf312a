#pragma once

#include <cstddef>
#include <functional>

namespace mandeldecor {

// requested <= 0 means "use the hardware". MANDELDECOR_THREADS, when set to a positive
// integer, caps the result.
int resolve_workers(int requested);

// Runs body(i) for i in [0, count) on up to `workers` threads. Indices are handed out in
// order; the first exception thrown by any body is rethrown after all threads join.
void parallel_for(std::size_t count, int workers, const std::function<void(std::size_t)>& body);

}  // namespace mandeldecor
