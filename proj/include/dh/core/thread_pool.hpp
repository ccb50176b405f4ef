#pragma once

#include <condition_variable>
#include <cstddef>
#include <functional>
#include <mutex>
#include <queue>
#include <thread>
#include <vector>

namespace dh {

// Fixed-size worker pool. submit() enqueues; wait_idle() blocks until the
// queue drains and all workers are parked.
class ThreadPool {
public:
    explicit ThreadPool(std::size_t workers);
    ~ThreadPool();

    ThreadPool(const ThreadPool&) = delete;
    ThreadPool& operator=(const ThreadPool&) = delete;

    void submit(std::function<void()> task);
    void wait_idle();

    std::size_t size() const { return threads_.size(); }

private:
    void worker_loop();

    std::vector<std::thread> threads_;
    std::queue<std::function<void()>> queue_;
    std::mutex mu_;
    std::condition_variable cv_task_;
    std::condition_variable cv_idle_;
    std::size_t active_ = 0;
    bool stop_ = false;
};

// Runs fn(i) for i in [0, count) across `workers` threads, blocking until all
// complete. Exceptions inside fn terminate; callers catch their own.
void parallel_for_each(std::size_t count, std::size_t workers,
                       const std::function<void(std::size_t)>& fn);

}  // namespace dh
