#pragma once

#include <cstddef>
#include <exception>
#include <functional>

namespace symcrit::parallel {

/// Worker count used by every parallel loop in the library. 0 selects
/// std::thread::hardware_concurrency().
void set_thread_count(unsigned n);
unsigned thread_count();

/// Calls body(i) for i in [0, n), splitting the range into contiguous chunks
/// across worker threads. Results must be written to index-addressed storage so
/// that assembly order does not depend on scheduling. The first exception (by
/// chunk order) is rethrown after all workers join.
void for_each_index(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace symcrit::parallel
