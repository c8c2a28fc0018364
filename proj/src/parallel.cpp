#include "hg/parallel.hpp"

#include <algorithm>
#include <cstdlib>
#include <thread>
#include <vector>

namespace hg {

int worker_count()
{
    int hw = static_cast<int>(std::thread::hardware_concurrency());
    if (hw < 1)
        hw = 1;
    if (const char* env = std::getenv("HG_THREADS")) {
        int cap = std::atoi(env);
        if (cap >= 1)
            hw = std::min(hw, cap);
    }
    return hw;
}

void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t, int)>& body)
{
    int w = worker_count();
    if (w <= 1 || n < 4096) {
        body(0, n, 0);
        return;
    }
    std::vector<std::thread> pool;
    std::size_t chunk = (n + w - 1) / w;
    for (int t = 0; t < w; ++t) {
        std::size_t b = t * chunk, e = std::min(n, b + chunk);
        if (b >= e)
            break;
        pool.emplace_back(body, b, e, t);
    }
    for (auto& th : pool)
        th.join();
}

}  // namespace hg
