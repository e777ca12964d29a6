#pragma once

#include <cstddef>
#include <functional>

namespace qplab {

// Worker count used by every data-parallel loop in the library. Zero means
// "read QPLAB_THREADS, else hardware concurrency".
void set_thread_count(unsigned count);
unsigned thread_count();

// Runs body(i) for i in [0, count). Each index must write only its own
// output slot; callers reduce afterwards in index order, which keeps results
// bit-identical for any worker count.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace qplab
