#include "gridstack/parallel.hpp"

#include <algorithm>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace gridstack {

namespace {

// Nested calls run inline so inner loops never multiply the thread count.
thread_local bool in_parallel_region = false;

} // namespace

int worker_count() {
    if (const char* env = std::getenv("GRIDSTACK_THREADS")) {
        try {
            const int n = std::stoi(env);
            if (n > 0) return n;
        } catch (const std::exception&) {
        }
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

void parallel_for(int begin, int end, const std::function<void(int)>& body) {
    const int count = end - begin;
    if (count <= 0) return;
    const int workers = std::min(worker_count(), count);
    if (workers <= 1 || in_parallel_region) {
        for (int k = begin; k < end; ++k) body(k);
        return;
    }
    std::exception_ptr failure;
    std::mutex guard;
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) {
        const int lo = begin + static_cast<int>(static_cast<long long>(count) * w / workers);
        const int hi = begin + static_cast<int>(static_cast<long long>(count) * (w + 1) / workers);
        pool.emplace_back([&, lo, hi] {
            in_parallel_region = true;
            try {
                for (int k = lo; k < hi; ++k) body(k);
            } catch (...) {
                std::lock_guard<std::mutex> lock(guard);
                if (!failure) failure = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
}

} // namespace gridstack
