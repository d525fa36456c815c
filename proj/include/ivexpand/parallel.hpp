#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace ivexpand {

// Worker count: IVEXPAND_THREADS when set to a positive integer, otherwise
// the hardware concurrency.
inline std::size_t thread_count() {
    std::size_t n = 0;
    if (const char* env = std::getenv("IVEXPAND_THREADS")) {
        try {
            const long v = std::stol(env);
            n = v > 0 ? static_cast<std::size_t>(v) : 0;
        } catch (const std::exception&) {
            n = 0;
        }
    }
    if (n == 0) {
        n = std::max(1u, std::thread::hardware_concurrency());
    }
    return n;
}

// out[k] = fn(items[k]); results keep input order regardless of scheduling.
// The first exception thrown by any task is rethrown after all workers stop.
template <class T, class Fn>
auto parallel_map(const std::vector<T>& items, Fn fn) -> std::vector<decltype(fn(items.front()))> {
    using R = decltype(fn(items.front()));
    std::vector<R> out(items.size());
    const std::size_t workers = std::min(thread_count(), items.size());
    if (workers <= 1) {
        for (std::size_t k = 0; k < items.size(); ++k) {
            out[k] = fn(items[k]);
        }
        return out;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto work = [&] {
        for (std::size_t k = next++; k < items.size(); k = next++) {
            try {
                out[k] = fn(items[k]);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) {
                    failure = std::current_exception();
                }
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back(work);
    }
    for (auto& t : pool) {
        t.join();
    }
    if (failure) {
        std::rethrow_exception(failure);
    }
    return out;
}

} // namespace ivexpand
