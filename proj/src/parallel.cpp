#include "parallel.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace bubblex {

namespace {

std::atomic<int> g_jobs{-1};

int env_jobs() {
    const char* s = std::getenv("BUBBLEX_JOBS");
    if (!s) return 0;
    int v = std::atoi(s);
    return v > 0 ? v : 0;
}

}  // namespace

void set_jobs(int j) { g_jobs = j < 0 ? 0 : j; }

int jobs() {
    int j = g_jobs.load();
    if (j < 0) j = env_jobs();
    if (j == 0) j = static_cast<int>(std::thread::hardware_concurrency());
    return j < 1 ? 1 : j;
}

void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body) {
    const std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(jobs()), count);
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mu;
    auto run = [&] {
        for (;;) {
            std::size_t i = next++;
            if (i >= count) return;
            try {
                body(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mu);
                if (!error) error = std::current_exception();
                next = count;
            }
        }
    };
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < workers; ++t) pool.emplace_back(run);
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

}  // namespace bubblex
