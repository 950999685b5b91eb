#pragma once

#include <atomic>
#include <condition_variable>
#include <cstdint>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace detsgrad {

// Persistent worker pool for bulk-synchronous rounds. parallel_for runs
// fn(i) for i in [0, n) and blocks until every index completed and all
// workers left the job. Tasks must write only to their own slots; under that
// contract results are independent of the worker count and of scheduling
// order.
class WorkerPool {
public:
    explicit WorkerPool(int threads) {
        for (int t = 0; t < threads - 1; ++t)
            workers_.emplace_back([this] { worker_loop(); });
    }

    ~WorkerPool() {
        {
            std::unique_lock lock(mutex_);
            stop_ = true;
        }
        cv_start_.notify_all();
        for (auto& t : workers_) t.join();
    }

    WorkerPool(const WorkerPool&) = delete;
    WorkerPool& operator=(const WorkerPool&) = delete;

    int thread_count() const { return static_cast<int>(workers_.size()) + 1; }

    void parallel_for(int n, const std::function<void(int)>& fn) {
        if (n <= 0) return;
        if (workers_.empty() || n == 1) {
            for (int i = 0; i < n; ++i) fn(i);
            if (first_error_) rethrow();
            return;
        }
        {
            std::unique_lock lock(mutex_);
            fn_ = &fn;
            total_ = n;
            next_.store(0, std::memory_order_relaxed);
            done_.store(0, std::memory_order_relaxed);
            ++generation_;
        }
        cv_start_.notify_all();
        run_indices();
        {
            std::unique_lock lock(mutex_);
            cv_done_.wait(lock, [this] {
                return done_.load(std::memory_order_acquire) >= total_ && active_ == 0;
            });
            fn_ = nullptr;
        }
        if (first_error_) rethrow();
    }

private:
    void rethrow() {
        auto err = first_error_;
        first_error_ = nullptr;
        std::rethrow_exception(err);
    }

    void run_indices() {
        while (true) {
            const int i = next_.fetch_add(1, std::memory_order_relaxed);
            if (i >= total_) break;
            try {
                (*fn_)(i);
            } catch (...) {
                std::unique_lock lock(mutex_);
                if (!first_error_) first_error_ = std::current_exception();
            }
            done_.fetch_add(1, std::memory_order_acq_rel);
        }
    }

    void worker_loop() {
        std::uint64_t seen = 0;
        std::unique_lock lock(mutex_);
        while (true) {
            cv_start_.wait(lock, [&] { return stop_ || generation_ != seen; });
            if (stop_) return;
            seen = generation_;
            ++active_;
            lock.unlock();
            run_indices();
            lock.lock();
            --active_;
            if (active_ == 0 && done_.load(std::memory_order_acquire) >= total_)
                cv_done_.notify_all();
        }
    }

    std::vector<std::thread> workers_;
    std::mutex mutex_;
    std::condition_variable cv_start_, cv_done_;
    const std::function<void(int)>* fn_ = nullptr;
    int total_ = 0;
    int active_ = 0;
    std::atomic<int> next_{0};
    std::atomic<int> done_{0};
    std::uint64_t generation_ = 0;
    bool stop_ = false;
    std::exception_ptr first_error_;
};

}  // namespace detsgrad
