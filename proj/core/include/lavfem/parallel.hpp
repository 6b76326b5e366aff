#pragma once

#include <cstddef>
#include <functional>

namespace lavfem {

/// Worker cap from LAVFEM_THREADS. Unset, empty, or unparsable values mean
/// 1 (sequential, deterministic summation order).
unsigned threads_from_env();

/// Splits [0, n) into contiguous chunks, one per worker, and calls
/// body(begin, end, chunk) for each. With threads <= 1 everything runs on the
/// calling thread as a single chunk. Chunk boundaries depend only on n and
/// threads, so per-chunk results reduced in chunk order are reproducible.
void for_each_chunk(std::size_t n, unsigned threads,
                    const std::function<void(std::size_t, std::size_t, std::size_t)>& body);

/// Number of chunks for_each_chunk will use.
std::size_t chunk_count(std::size_t n, unsigned threads);

}  // namespace lavfem
