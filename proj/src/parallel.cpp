#include "mfl/parallel.hpp"

#include <atomic>
#include <exception>
#include <mutex>
#include <thread>

#include "mfl/error.hpp"

namespace mfl {

namespace {

unsigned default_workers() {
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
}

std::atomic<unsigned>& workers_setting() {
    static std::atomic<unsigned> workers{default_workers()};
    return workers;
}

}  // namespace

unsigned worker_count() noexcept { return workers_setting().load(); }

void set_worker_count(unsigned workers) {
    if (workers == 0) throw Error(ErrorKind::invalid_argument, "worker count must be >= 1");
    workers_setting().store(workers);
}

void parallel_for(std::size_t tasks, const std::function<void(std::size_t)>& task) {
    const std::size_t threads = std::min<std::size_t>(worker_count(), tasks);
    if (threads <= 1) {
        for (std::size_t i = 0; i < tasks; ++i) task(i);
        return;
    }

    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= tasks) return;
            try {
                task(i);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
                next.store(tasks);
                return;
            }
        }
    };

    std::vector<std::jthread> pool;
    pool.reserve(threads - 1);
    for (std::size_t t = 1; t < threads; ++t) pool.emplace_back(worker);
    worker();
    pool.clear();
    if (failure) std::rethrow_exception(failure);
}

}  // namespace mfl
