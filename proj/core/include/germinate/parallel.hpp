#pragma once

#include <cstddef>
#include <functional>

namespace germinate {

/// Worker count: GERMINATE_THREADS if set (clamped to [1, 64]), otherwise 1.
unsigned thread_count();

/// Runs body(i) for i in [0, n). Work is split into contiguous index blocks;
/// each body writes only to its own slot, so results are independent of the
/// worker count. The first exception (lowest index block) is rethrown.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace germinate
