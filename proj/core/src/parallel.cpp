#include "iktsne/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <thread>
#include <vector>

namespace iktsne {

namespace {
std::atomic<unsigned> g_max_threads{0};
}

void set_max_threads(unsigned count) {
    g_max_threads.store(count);
}

unsigned max_threads() {
    unsigned cap = g_max_threads.load();
    if (cap == 0) {
        cap = std::max(1u, std::thread::hardware_concurrency());
    }
    return cap;
}

void parallel_for(std::size_t count, const std::function<void(std::size_t, std::size_t)>& body) {
    if (count == 0) {
        return;
    }
    const std::size_t workers = std::min<std::size_t>(max_threads(), count);
    if (workers <= 1) {
        body(0, count);
        return;
    }
    const std::size_t chunk = (count + workers - 1) / workers;
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(workers);
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        const std::size_t begin = w * chunk;
        const std::size_t end = std::min(count, begin + chunk);
        if (begin >= end) {
            break;
        }
        pool.emplace_back([&body, &errors, w, begin, end] {
            try {
                body(begin, end);
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    }
    for (auto& t : pool) {
        t.join();
    }
    // rethrow the lowest-range failure so error reporting stays deterministic
    for (auto& e : errors) {
        if (e) {
            std::rethrow_exception(e);
        }
    }
}

}  // namespace iktsne
