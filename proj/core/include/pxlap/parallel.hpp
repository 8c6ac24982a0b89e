#pragma once

#include <algorithm>
#include <cstddef>
#include <thread>
#include <vector>

namespace pxlap {

/// Runs body(begin, end) over [0, n) split into `threads` contiguous chunks.
/// Bodies must write only to their own index range, so results do not depend
/// on the thread count. threads <= 1 runs inline.
template <class Body>
void parallel_for(std::size_t n, int threads, Body&& body) {
    if (threads <= 1 || n < 2) {
        body(std::size_t{0}, n);
        return;
    }
    const std::size_t t = std::min<std::size_t>(static_cast<std::size_t>(threads), n);
    const std::size_t chunk = (n + t - 1) / t;
    std::vector<std::jthread> pool;
    pool.reserve(t);
    for (std::size_t i = 0; i < t; ++i) {
        const std::size_t b = i * chunk;
        const std::size_t e = std::min(n, b + chunk);
        if (b >= e) break;
        pool.emplace_back([&body, b, e] { body(b, e); });
    }
}

}  // namespace pxlap
