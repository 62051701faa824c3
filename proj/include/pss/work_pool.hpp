/*******************************************************************************
 * include/pss/work_pool.hpp
 *
 * Light-weight thread pool with a central job queue and an idle counter that
 * busy jobs poll to release work voluntarily.
 *
 *******************************************************************************
 * Published under the Boost Software License, Version 1.0
 ******************************************************************************/

#ifndef PSS_WORK_POOL_HEADER
#define PSS_WORK_POOL_HEADER

#include <pss/counters.hpp>
#include <pss/share.hpp>

#include <atomic>
#include <condition_variable>
#include <cstdint>
#include <deque>
#include <exception>
#include <mutex>
#include <vector>

namespace pss {

/*!
 * Jobs receive the executing worker's counters. run() starts p workers, which
 * take jobs first-in first-out until the queue is empty and all workers are
 * idle. The first exception thrown by a job drops the remaining jobs and is
 * rethrown from run().
 */
class WorkPool
{
public:
    using Job = SharedJob;

    explicit WorkPool(std::size_t num_threads);

    WorkPool(const WorkPool&) = delete;
    WorkPool& operator=(const WorkPool&) = delete;

    std::size_t num_threads() const { return p_; }

    //! thread-safe, also from within running jobs
    void enqueue(Job job);

    //! execute all queued and transitively enqueued jobs
    void run();

    //! number of workers currently waiting for work; read without locking
    std::size_t idle_workers() const {
        return idle_.load(std::memory_order_relaxed);
    }

    //! idle() polls idle_workers, release() enqueues
    const ShareHook& hook() const { return hook_; }

    //! counters accumulated over all runs; jobs counts executed jobs
    SortCounters counters() const { return counters_.load(); }
    std::uint64_t enqueued() const { return enqueued_.load(); }

private:
    void worker();

    std::size_t p_;
    std::mutex mutex_;
    std::condition_variable cv_;
    std::deque<Job> queue_;
    std::atomic<std::size_t> idle_{0};
    std::size_t waiting_ = 0;
    bool finished_ = false;
    std::exception_ptr error_;
    std::atomic<std::uint64_t> enqueued_{0};
    AtomicCounters counters_;
    ShareHook hook_;
};

//! run root jobs on a fresh pool of p workers and return its counters
SortCounters pool_run(std::size_t p, std::vector<SharedJob> roots);

} // namespace pss

#endif // !PSS_WORK_POOL_HEADER

/******************************************************************************/
