#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <cstdlib>
#include <exception>
#include <string>
#include <thread>
#include <vector>

namespace lc {

// LOOPCURRENT_MAX_THREADS caps the worker count
inline int max_threads() {
  int hw = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  if (const char* env = std::getenv("LOOPCURRENT_MAX_THREADS")) {
    try {
      int cap = std::stoi(env);
      if (cap >= 1) return std::min(hw, cap);
    } catch (...) {
    }
  }
  return hw;
}

// Splits [0, n) into a fixed number of chunks, independent of the thread count, and
// returns one partial per chunk in chunk order so reductions are deterministic.
template <class Partial, class Body>
std::vector<Partial> chunked_map(std::int64_t n, int chunks, const Partial& init, Body body) {
  chunks = static_cast<int>(std::max<std::int64_t>(1, std::min<std::int64_t>(chunks, n)));
  std::vector<Partial> parts(chunks, init);
  auto range = [&](int c) {
    std::int64_t b = n * c / chunks, e = n * (c + 1) / chunks;
    body(b, e, parts[c]);
  };
  int workers = std::min(max_threads(), chunks);
  if (workers <= 1) {
    for (int c = 0; c < chunks; ++c) range(c);
    return parts;
  }
  std::atomic<int> next{0};
  std::vector<std::exception_ptr> errors(workers);
  std::vector<std::thread> pool;
  for (int t = 0; t < workers; ++t)
    pool.emplace_back([&, t] {
      try {
        for (int c; (c = next.fetch_add(1)) < chunks;) range(c);
      } catch (...) {
        errors[t] = std::current_exception();
        next = chunks;
      }
    });
  for (auto& th : pool) th.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return parts;
}

}  // namespace lc
