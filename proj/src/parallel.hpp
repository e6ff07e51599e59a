#ifndef RFCW_PARALLEL_HPP
#define RFCW_PARALLEL_HPP

#include <cstdlib>
#include <exception>
#include <functional>
#include <thread>
#include <vector>

namespace rfcw::detail {

// Runs fn(0..count-1) over a small thread pool.  Work item i always receives
// the same i, so results filled into slot i are schedule-independent.
// RFCW_THREADS caps the pool; unset falls back to the hardware count.
inline void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn) {
    std::size_t threads = std::thread::hardware_concurrency();
    if (threads == 0) threads = 1;
    if (const char* env = std::getenv("RFCW_THREADS")) {
        const long cap = std::strtol(env, nullptr, 10);
        if (cap >= 1) threads = static_cast<std::size_t>(cap);
    }
    threads = std::min(threads, count);
    if (threads <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(threads);
    pool.reserve(threads);
    for (std::size_t t = 0; t < threads; ++t) {
        pool.emplace_back([&, t] {
            try {
                for (std::size_t i = t; i < count; i += threads) fn(i);
            } catch (...) {
                errors[t] = std::current_exception();
            }
        });
    }
    for (auto& th : pool) th.join();
    for (const auto& e : errors)
        if (e) std::rethrow_exception(e);
}

} // namespace rfcw::detail

#endif
