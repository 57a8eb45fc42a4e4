#pragma once

#include <exception>
#include <functional>
#include <thread>
#include <vector>

namespace dpr {

// Applies fn to 0..count-1 on up to `bound` worker threads and returns the
// results in index order, so callers stay deterministic regardless of
// scheduling. The first exception (by index) is rethrown after all workers
// finish.
template <typename Result>
std::vector<Result> parallel_map(std::size_t count, int bound,
                                 const std::function<Result(std::size_t)>& fn) {
    std::vector<Result> results(count);
    if (count == 0) {
        return results;
    }
    const int workers =
        std::max(1, std::min<int>(bound, static_cast<int>(count)));
    if (workers == 1) {
        for (std::size_t i = 0; i < count; ++i) {
            results[i] = fn(i);
        }
        return results;
    }

    std::vector<std::exception_ptr> errors(count);
    std::vector<std::thread> threads;
    threads.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) {
        threads.emplace_back([&, w] {
            for (std::size_t i = static_cast<std::size_t>(w); i < count;
                 i += static_cast<std::size_t>(workers)) {
                try {
                    results[i] = fn(i);
                } catch (...) {
                    errors[i] = std::current_exception();
                }
            }
        });
    }
    for (std::thread& t : threads) {
        t.join();
    }
    for (const std::exception_ptr& e : errors) {
        if (e) {
            std::rethrow_exception(e);
        }
    }
    return results;
}

}  // namespace dpr
