/*******************************************************************************
 * include/pss/counters.hpp
 *
 * Instrumentation counters filled by the sorters.
 *
 *******************************************************************************
 * Published under the Boost Software License, Version 1.0
 ******************************************************************************/

#ifndef PSS_COUNTERS_HEADER
#define PSS_COUNTERS_HEADER

#include <atomic>
#include <cstdint>

namespace pss {

struct SortCounters {
    //! ternary character comparisons (LCP-aware sorters and merges)
    std::uint64_t char_comparisons = 0;
    //! random accesses to the character buffer
    std::uint64_t buffer_accesses = 0;
    //! jobs executed by a work pool
    std::uint64_t jobs = 0;
    //! voluntary work sharing events
    std::uint64_t share_events = 0;

    SortCounters& operator+=(const SortCounters& o) {
        char_comparisons += o.char_comparisons;
        buffer_accesses += o.buffer_accesses;
        jobs += o.jobs;
        share_events += o.share_events;
        return *this;
    }

    friend bool operator==(const SortCounters&, const SortCounters&) = default;
};

//! thread-safe accumulator, flushed from per-job local counters
class AtomicCounters
{
public:
    void add(const SortCounters& c) {
        char_comparisons_.fetch_add(c.char_comparisons, std::memory_order_relaxed);
        buffer_accesses_.fetch_add(c.buffer_accesses, std::memory_order_relaxed);
        jobs_.fetch_add(c.jobs, std::memory_order_relaxed);
        share_events_.fetch_add(c.share_events, std::memory_order_relaxed);
    }

    SortCounters load() const {
        SortCounters c;
        c.char_comparisons = char_comparisons_.load();
        c.buffer_accesses = buffer_accesses_.load();
        c.jobs = jobs_.load();
        c.share_events = share_events_.load();
        return c;
    }

private:
    std::atomic<std::uint64_t> char_comparisons_{0};
    std::atomic<std::uint64_t> buffer_accesses_{0};
    std::atomic<std::uint64_t> jobs_{0};
    std::atomic<std::uint64_t> share_events_{0};
};

} // namespace pss

#endif // !PSS_COUNTERS_HEADER

/******************************************************************************/
