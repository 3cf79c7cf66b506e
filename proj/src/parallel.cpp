#include "siegellab/parallel.hpp"

#include <atomic>
#include <cstdlib>
#include <exception>
#include <thread>
#include <vector>

namespace siegellab::util {

int worker_count(int requested) {
    if (const char* env = std::getenv("SIEGELLAB_WORKERS")) {
        const int w = std::atoi(env);
        if (w > 0) return w;
    }
    if (requested > 0) return requested;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : int(hw > 16 ? 16 : hw);
}

void parallel_for(long long n, int workers, const std::function<void(long long)>& body) {
    const int w = std::min<long long>(worker_count(workers), n);
    if (w <= 1) {
        for (long long i = 0; i < n; ++i) body(i);
        return;
    }
    std::atomic<long long> next{0};
    std::exception_ptr error;
    std::atomic<bool> failed{false};
    std::vector<std::thread> pool;
    pool.reserve(std::size_t(w));
    for (int t = 0; t < w; ++t)
        pool.emplace_back([&]() {
            while (!failed.load(std::memory_order_relaxed)) {
                const long long i = next.fetch_add(1);
                if (i >= n) break;
                try {
                    body(i);
                } catch (...) {
                    if (!failed.exchange(true)) error = std::current_exception();
                    break;
                }
            }
        });
    for (auto& th : pool) th.join();
    if (error) std::rethrow_exception(error);
}

} // namespace siegellab::util
