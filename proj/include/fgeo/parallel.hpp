#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace fgeo {

/// Evaluates f(0..count-1) and returns the results in index order, so the
/// output does not depend on scheduling. With `parallel` the indices are
/// split into contiguous blocks over hardware threads; the first exception
/// (lowest index) is rethrown.
template <class F>
auto parallel_map(std::size_t count, F&& f, bool parallel) {
  using R = decltype(f(std::size_t{0}));
  std::vector<R> out(count);
  const std::size_t workers =
      parallel ? std::min<std::size_t>(count, std::max(1u, std::thread::hardware_concurrency())) : 1;
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) out[i] = f(i);
    return out;
  }
  std::vector<std::exception_ptr> errors(count);
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (std::size_t i = w * count / workers; i < (w + 1) * count / workers; ++i) {
        try {
          out[i] = f(i);
        } catch (...) {
          errors[i] = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
  return out;
}

}  // namespace fgeo
