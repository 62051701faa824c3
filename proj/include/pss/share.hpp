/*******************************************************************************
 * include/pss/share.hpp
 *
 * Hook through which sequential sorters hand pending subproblems to a work
 * pool when other workers are idle.
 *
 *******************************************************************************
 * Published under the Boost Software License, Version 1.0
 ******************************************************************************/

#ifndef PSS_SHARE_HEADER
#define PSS_SHARE_HEADER

#include <pss/counters.hpp>

#include <functional>

namespace pss {

//! a released subproblem, run later with the executing worker's counters
using SharedJob = std::function<void(SortCounters&)>;

struct ShareHook {
    //! polled between subproblems; may return stale values
    std::function<bool()> idle;
    //! enqueue a released subproblem
    std::function<void(SharedJob)> release;

    bool should_share() const { return idle && idle(); }
};

} // namespace pss

#endif // !PSS_SHARE_HEADER

/******************************************************************************/
