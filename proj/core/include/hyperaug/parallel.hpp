#pragma once

#include <cstddef>
#include <functional>

namespace hyperaug {

/// Resolves a worker count; 0 means std::thread::hardware_concurrency().
std::size_t resolve_workers(std::size_t requested) noexcept;

/// Runs body(i) for i in [0, count) on up to `workers` threads, handing out
/// indices dynamically. The first exception thrown by any body stops further
/// work and is rethrown on the calling thread.
void parallel_for(std::size_t count, std::size_t workers,
                  const std::function<void(std::size_t)>& body);

}  // namespace hyperaug
