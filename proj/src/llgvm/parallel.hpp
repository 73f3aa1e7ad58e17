#pragma once

#include <cstddef>
#include <functional>

namespace llgvm::parallel {

void set_thread_count(int n);
int thread_count();

/// Runs body(begin, end) over a static partition of [0, n). Callers must make
/// each index's result independent of the partition; every reduction in the
/// library is done afterwards in a fixed serial order so results never depend
/// on the thread count.
void for_blocks(std::size_t n, const std::function<void(std::size_t, std::size_t)>& body);

template <class F>
void for_each_index(std::size_t n, F&& f) {
  for_blocks(n, [&](std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i) f(i);
  });
}

}  // namespace llgvm::parallel
