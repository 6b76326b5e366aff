#include "lavfem/parallel.hpp"

#include <algorithm>
#include <cstdlib>
#include <exception>
#include <string>
#include <thread>
#include <vector>

namespace lavfem {

unsigned threads_from_env() {
  const char* raw = std::getenv("LAVFEM_THREADS");
  if (raw == nullptr || *raw == '\0') return 1;
  try {
    const long v = std::stol(raw);
    return v < 1 ? 1u : static_cast<unsigned>(v);
  } catch (const std::exception&) {
    return 1;
  }
}

std::size_t chunk_count(std::size_t n, unsigned threads) {
  if (n == 0) return 0;
  return std::clamp<std::size_t>(threads, 1, n);
}

void for_each_chunk(std::size_t n, unsigned threads,
                    const std::function<void(std::size_t, std::size_t, std::size_t)>& body) {
  const std::size_t chunks = chunk_count(n, threads);
  if (chunks == 0) return;
  if (chunks == 1) {
    body(0, n, 0);
    return;
  }
  std::vector<std::exception_ptr> errors(chunks);
  std::vector<std::thread> workers;
  workers.reserve(chunks);
  for (std::size_t c = 0; c < chunks; ++c) {
    const std::size_t begin = n * c / chunks;
    const std::size_t end = n * (c + 1) / chunks;
    workers.emplace_back([&, begin, end, c] {
      try {
        body(begin, end, c);
      } catch (...) {
        errors[c] = std::current_exception();
      }
    });
  }
  for (auto& w : workers) w.join();
  // Lowest chunk wins so the reported failure does not depend on timing.
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace lavfem
