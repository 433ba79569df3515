#pragma once

#include <functional>

namespace sympb {

// Worker count: SYMPB_THREADS if set to a positive integer, else hardware concurrency.
int thread_count();

// Runs body(i) for i in [0, n). Each index writes only its own output slot, so results do not
// depend on the schedule. The exception from the lowest failing index is rethrown.
void parallel_for(int n, const std::function<void(int)>& body);

}  // namespace sympb
