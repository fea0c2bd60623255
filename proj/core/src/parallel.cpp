#include "structlim/parallel.hpp"

#include <atomic>

namespace structlim {

namespace {
std::atomic<int> g_thread_limit{0};
}

void set_thread_limit(int threads) { g_thread_limit.store(threads < 0 ? 0 : threads); }

int thread_limit() {
    int t = g_thread_limit.load();
    if (t > 0) return t;
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

} // namespace structlim
