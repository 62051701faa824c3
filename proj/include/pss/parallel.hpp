/*******************************************************************************
 * include/pss/parallel.hpp
 *
 * Parallel sorters on the work pool: parallel super scalar string sample sort,
 * parallel caching multikey quicksort with block-wise ternary partitioning,
 * parallel MSD radix sort and the partitioned sorter which sorts parts
 * independently and merges them with LCP-aware merge jobs.
 *
 *******************************************************************************
 * Published under the Boost Software License, Version 1.0
 ******************************************************************************/

#ifndef PSS_PARALLEL_HEADER
#define PSS_PARALLEL_HEADER

#include <pss/counters.hpp>
#include <pss/sample_sort.hpp>
#include <pss/string_set.hpp>
#include <pss/work_pool.hpp>

#include <cstdint>
#include <span>

namespace pss {

//! default worker count
std::size_t default_threads();

/******************************************************************************/
// Parallel S5

/*!
 * Subproblems of at least n/p strings run a fully parallel step: one sample
 * and splitter tree, p shards classified in parallel into private bucket
 * counters, a global prefix sum over those counters and a parallel
 * redistribution into the scratch array. Smaller subproblems run the
 * sequential sample sort with voluntary work sharing. With p = 1 the result
 * and counters equal s5_sort.
 */
void parallel_s5(const CharBuffer& buf, std::span<StringHandle> strings,
                 std::span<std::size_t> lcp, std::span<std::uint8_t> dchar,
                 std::size_t p, const S5Config& config = {},
                 SortCounters* counters = nullptr);

StringSet parallel_s5(StringSet set, std::size_t p,
                      const S5Config& config = {},
                      SortCounters* counters = nullptr);

SortedWithLcp parallel_s5_lcp(StringSet set, std::size_t p,
                              bool with_dchar = false,
                              const S5Config& config = {},
                              SortCounters* counters = nullptr);

/******************************************************************************/
// Parallel caching MKQS

struct ParallelMkqsOptions {
    //! entries per block
    std::size_t block_size = 131072;
};

struct ParallelMkqsStats {
    //! fully parallel partitioning steps
    std::size_t parallel_steps = 0;
    //! largest number of partially filled blocks left by one step
    std::size_t max_partial_blocks = 0;
    //! largest worker count of one step
    std::size_t max_step_workers = 0;
    //! depth of every parallel step in creation order
    std::vector<std::size_t> step_depths;
};

/*!
 * The input is cut into blocks of cached entries. A parallel step selects one
 * pivot word; each of its workers claims input blocks and fills three private
 * output blocks (<, =, >), appending full ones to the shared block sets. After
 * the input is exhausted the partial blocks are compacted. Workers are divided
 * among the three parts by size; keys are reloaded only for the = part.
 * Parts handled by a single worker, or no larger than one block, are
 * compacted and sorted by the sequential caching multikey quicksort.
 */
void parallel_mkqs(const CharBuffer& buf, std::span<StringHandle> strings,
                   std::size_t p, const ParallelMkqsOptions& options = {},
                   SortCounters* counters = nullptr,
                   ParallelMkqsStats* stats = nullptr);

StringSet parallel_mkqs(StringSet set, std::size_t p,
                        const ParallelMkqsOptions& options = {},
                        SortCounters* counters = nullptr,
                        ParallelMkqsStats* stats = nullptr);

/******************************************************************************/
// Parallel radix sort

/*!
 * Subproblems of at least n/p strings are distributed in parallel: per-shard
 * digit counting (16-bit digits from radix16_threshold strings on, otherwise
 * 8-bit), a global prefix sum and redistribution into a scratch array. Smaller
 * subproblems run the in-place 8-bit radix sort with voluntary work sharing.
 * With p = 1 the whole input goes to radix16_adaptive.
 */
void parallel_radix(const CharBuffer& buf, std::span<StringHandle> strings,
                    std::size_t p, SortCounters* counters = nullptr);

StringSet parallel_radix(StringSet set, std::size_t p,
                         SortCounters* counters = nullptr);

/******************************************************************************/
// Partitioned sort and merge

struct PartitionedOptions {
    //! number of parts K
    std::size_t parts = 4;
    //! cache distinguishing characters for the merge
    bool use_cache = false;
    //! merge jobs per worker requested from the splitter
    std::size_t jobs_per_thread = 8;
    //! running merge jobs check for idle workers every this many outputs
    std::size_t resplit_interval = 4096;
    S5Config config;
};

struct PartitionedResult {
    SortedWithLcp sorted;
    //! counters of the part sorting phase
    SortCounters sort_counters;
    //! counters of the merge phase including splitting and boundary repair
    SortCounters merge_counters;
    //! LCP sum gained by merging: L(output) minus the parts' LCP sums
    std::size_t delta_l = 0;
    std::size_t nonempty_parts = 0;
    //! executed merge jobs, and those of them covering a single stream
    std::size_t merge_jobs = 0;
    std::size_t copy_jobs = 0;
    //! running merge jobs split up for idle workers
    std::size_t resplits = 0;
};

/*!
 * Cut the input into K contiguous parts of roughly equal byte counts, sort
 * each by parallel_s5 with LCP output (and distinguishing characters with
 * use_cache) on max(1, p/K) workers, then merge all parts with merge jobs on
 * the full pool.
 */
PartitionedResult partitioned_merge_sort(StringSet set, std::size_t p,
                                         const PartitionedOptions& options = {});

} // namespace pss

#endif // !PSS_PARALLEL_HEADER

/******************************************************************************/
