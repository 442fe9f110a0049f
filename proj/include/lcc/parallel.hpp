#pragma once

#include <cstddef>
#include <functional>

namespace lcc {

// Runs body(i) for i in [0, count) on a pool of worker threads. Each index is
// processed exactly once; the result of an index must not depend on the
// others. Nested calls from inside a worker run inline.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

// 0 selects std::thread::hardware_concurrency().
void set_worker_count(unsigned workers);
unsigned worker_count();

} // namespace lcc
