#include "noisectl/parallel.hpp"

#include <atomic>
#include <thread>
#include <vector>

namespace noisectl {

static std::atomic<int> g_threads{1};

int thread_count() { return g_threads.load(); }

void set_thread_count(int n) { g_threads.store(n < 1 ? 1 : n); }

void parallel_for(int64_t n, const std::function<void(int64_t, int64_t)>& fn) {
    int workers = thread_count();
    if (workers <= 1 || n < 2) {
        fn(0, n);
        return;
    }
    if (workers > n) workers = static_cast<int>(n);
    std::vector<std::thread> pool;
    pool.reserve(static_cast<size_t>(workers));
    int64_t chunk = (n + workers - 1) / workers;
    for (int w = 0; w < workers; ++w) {
        int64_t b = w * chunk;
        int64_t e = std::min<int64_t>(n, b + chunk);
        if (b >= e) break;
        pool.emplace_back([&fn, b, e] { fn(b, e); });
    }
    for (auto& t : pool) t.join();
}

}  // namespace noisectl
