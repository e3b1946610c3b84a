#pragma once

#include <cstddef>
#include <functional>

namespace fraclab {

/// Forces serial execution of every row loop. Row results are always combined
/// in index order, so this never changes numerical output; it only pins the
/// thread count to one.
void set_deterministic(bool on);
bool deterministic();

/// Worker count: 1 in deterministic mode, otherwise FRACLAB_THREADS if set,
/// otherwise the hardware concurrency.
unsigned worker_count();

/// Calls body(i) for i in [0, n), split into contiguous blocks across workers.
/// body must only write to slot i of caller-owned storage.
void parallel_rows(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace fraclab
