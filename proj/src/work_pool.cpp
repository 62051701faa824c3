/*******************************************************************************
 * src/work_pool.cpp
 *
 *******************************************************************************
 * Published under the Boost Software License, Version 1.0
 ******************************************************************************/

#include <pss/work_pool.hpp>

#include <stdexcept>
#include <thread>

namespace pss {

WorkPool::WorkPool(std::size_t num_threads) : p_(num_threads) {
    if (p_ == 0) throw std::invalid_argument("WorkPool: zero threads");
    hook_.idle = [this] { return idle_workers() > 0; };
    hook_.release = [this](Job job) { enqueue(std::move(job)); };
}

void WorkPool::enqueue(Job job) {
    {
        std::lock_guard<std::mutex> lock(mutex_);
        if (error_) return;
        queue_.push_back(std::move(job));
    }
    enqueued_.fetch_add(1);
    cv_.notify_one();
}

void WorkPool::worker() {
    SortCounters local;
    std::unique_lock<std::mutex> lock(mutex_);
    while (true)
    {
        if (!queue_.empty()) {
            Job job = std::move(queue_.front());
            queue_.pop_front();
            lock.unlock();
            try {
                job(local);
            }
            catch (...) {
                std::lock_guard<std::mutex> guard(mutex_);
                if (!error_) error_ = std::current_exception();
                queue_.clear();
            }
            ++local.jobs;
            lock.lock();
            continue;
        }
        if (finished_) break;

        ++waiting_;
        idle_.store(waiting_, std::memory_order_relaxed);
        if (waiting_ == p_) {
            finished_ = true;
            cv_.notify_all();
            break;
        }
        cv_.wait(lock, [this] { return finished_ || !queue_.empty(); });
        --waiting_;
        idle_.store(waiting_, std::memory_order_relaxed);
    }
    lock.unlock();
    counters_.add(local);
}

void WorkPool::run() {
    {
        std::lock_guard<std::mutex> lock(mutex_);
        finished_ = false;
        waiting_ = 0;
        error_ = nullptr;
    }
    idle_.store(0);

    std::vector<std::thread> threads;
    threads.reserve(p_ - 1);
    for (std::size_t i = 1; i < p_; ++i) threads.emplace_back([this] { worker(); });
    worker();
    for (auto& t : threads) t.join();

    idle_.store(0);
    if (error_) std::rethrow_exception(error_);
}

SortCounters pool_run(std::size_t p, std::vector<SharedJob> roots) {
    WorkPool pool(p);
    for (auto& j : roots) pool.enqueue(std::move(j));
    pool.run();
    return pool.counters();
}

} // namespace pss

/******************************************************************************/
