#pragma once

#include <cstddef>
#include <functional>

namespace coarselab {

/// Worker count used by internal loops. Reads COARSELAB_THREADS once;
/// falls back to the hardware concurrency.
std::size_t thread_count();

/// Override the worker count for the current process (0 restores the default).
void set_thread_count(std::size_t n);

/// Runs body(begin, end) over contiguous chunks of [0, n). Chunk boundaries
/// depend only on n and the worker count, so callers that reduce per-chunk
/// results in chunk order get deterministic output.
void parallel_chunks(std::size_t n,
                     const std::function<void(std::size_t chunk, std::size_t begin,
                                              std::size_t end)>& body);

std::size_t chunk_count(std::size_t n);

}  // namespace coarselab
