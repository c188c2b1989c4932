#pragma once

#include <cstddef>
#include <functional>

namespace bubblex {

// Worker count for parallel sections; 0 selects the hardware concurrency.
void set_jobs(int jobs);
int jobs();

// Runs body(i) for i in [0, count) on up to jobs() threads. The first exception
// thrown by any iteration is rethrown after all workers finish.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace bubblex
