// parallel.hpp: index-claiming thread pool

#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <thread>
#include <vector>

namespace omstirap {

// Calls fn(i) for i in [0, count) on up to `workers` threads. Each index is
// claimed once; fn must not throw and should write only to slot i.
template <class Fn>
void parallel_for(std::size_t count, std::size_t workers, Fn&& fn) {
    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t i = next++; i < count; i = next++) fn(i);
    };
    workers = std::max<std::size_t>(1, std::min(workers, count));
    std::vector<std::thread> pool;
    for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(work);
    work();
    for (auto& th : pool) th.join();
}

} // namespace omstirap
