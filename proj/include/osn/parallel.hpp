#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace osn {

/// Number of workers used for `tasks` independent jobs. Honors OSN_THREADS.
inline std::size_t worker_count(std::size_t tasks) {
    std::size_t hw = std::max(1u, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("OSN_THREADS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v > 0) hw = static_cast<std::size_t>(v);
    }
    return std::max<std::size_t>(1, std::min(hw, tasks));
}

/// Runs body(task, worker) for task in [0, tasks). Tasks are claimed
/// dynamically; callers keep per-worker state indexed by `worker` and merge
/// it afterwards with an order-independent reduction.
template <typename Body>
void parallel_for(std::size_t tasks, std::size_t workers, Body&& body) {
    if (tasks == 0) return;
    if (workers <= 1) {
        for (std::size_t t = 0; t < tasks; ++t) body(t, std::size_t{0});
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::thread> threads;
    threads.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        threads.emplace_back([&, w] {
            try {
                for (std::size_t t = next++; t < tasks; t = next++) body(t, w);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
                next = tasks;
            }
        });
    }
    for (auto& t : threads) t.join();
    if (failure) std::rethrow_exception(failure);
}

}  // namespace osn
