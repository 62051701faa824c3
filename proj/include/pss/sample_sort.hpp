/*******************************************************************************
 * include/pss/sample_sort.hpp
 *
 * Super scalar string sample sort: splitter tree over word keys, branch-free
 * classification into 2v+1 buckets, oracle-based distribution and the
 * recursive sequential driver with optional LCP and distinguishing character
 * output.
 *
 *******************************************************************************
 * Published under the Boost Software License, Version 1.0
 ******************************************************************************/

#ifndef PSS_SAMPLE_SORT_HEADER
#define PSS_SAMPLE_SORT_HEADER

#include <pss/counters.hpp>
#include <pss/share.hpp>
#include <pss/string_set.hpp>

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace pss {

//! bucket indices fit in 16 bits for up to 32767 splitters
using bucket_type = std::uint16_t;

inline constexpr std::size_t max_splitters_limit = 32767;

enum class ClassifyVariant {
    //! full descent, then one equality test with the in-order splitter
    unroll,
    //! equality test at every node with early exit
    equal
};

/*!
 * Perfect binary search tree of v = 2^d - 1 word keys. Bucket 2j holds keys
 * strictly between inorder[j-1] and inorder[j], bucket 2j+1 keys equal to
 * inorder[j]; with duplicate splitters the leftmost equal one is used.
 */
class SplitterTree
{
public:
    SplitterTree() = default;

    //! build from a non-decreasing sequence of 2^d - 1 keys
    explicit SplitterTree(std::vector<key_type> inorder);

    std::size_t num_splitters() const { return inorder_.size(); }
    std::size_t num_buckets() const { return 2 * inorder_.size() + 1; }
    std::size_t levels() const { return levels_; }

    //! level order, root at index 1, children 2i and 2i+1; index 0 unused
    const std::vector<key_type>& tree() const { return tree_; }
    const std::vector<key_type>& inorder() const { return inorder_; }

    //! v+1 entries: 0, key_lcp of consecutive splitters, 0
    const std::vector<std::uint8_t>& slcp() const { return slcp_; }

    //! bucket of one key
    std::size_t classify_unroll(key_type key) const;
    std::size_t classify_equal(key_type key) const;

    //! equality bucket of splitter j holds completely equal strings
    bool equality_final(std::size_t j) const {
        return key_has_terminator(inorder_[j]);
    }

    /*!
     * Common prefix length, relative to the step depth, which all strings in
     * the bucket share: slcp for range buckets, key_width or the splitter's
     * length for equality buckets.
     */
    std::size_t bucket_lcp(std::size_t bucket) const;

private:
    std::vector<key_type> tree_;
    std::vector<key_type> inorder_;
    std::vector<std::uint8_t> slcp_;
    //! per tree node: equality bucket of its leftmost duplicate
    std::vector<bucket_type> node_eq_bucket_;
    std::size_t levels_ = 0;
};

//! Sorted sample of v*alpha + alpha - 1 keys at depth from seeded positions.
std::vector<key_type> draw_sample(const CharBuffer& buf,
                                  std::span<const StringHandle> strings,
                                  std::size_t depth, std::size_t v,
                                  std::size_t alpha, std::uint64_t seed);

/*!
 * Recursive middle selection: the middle sample of a range becomes the middle
 * splitter, samples equal to it are skipped on both sides and the remaining
 * left and right ranges are used for the subtrees. An exhausted range repeats
 * the nearest selected splitter.
 */
SplitterTree select_splitters(std::span<const key_type> sample, std::size_t v);

//! largest 2^d - 1 <= max(1, min(cap, n/2))
std::size_t splitter_count_for(std::size_t n, std::size_t cap);

//! oracle[i] = bucket of keys[i]
void classify(const SplitterTree& tree, std::span<const key_type> keys,
              std::span<bucket_type> oracle, ClassifyVariant variant);

/*!
 * Stable counting distribution of src into dst by oracle. bucket_begin gets
 * num_buckets + 1 boundaries.
 */
void distribute(std::span<const StringHandle> src,
                std::span<const bucket_type> oracle, std::size_t num_buckets,
                std::span<StringHandle> dst,
                std::span<std::size_t> bucket_begin);

//! snapshot passed to S5Config::on_step after each distribution
struct S5StepInfo {
    const CharBuffer* buf = nullptr;
    std::size_t depth = 0;
    const SplitterTree* tree = nullptr;
    //! the step's strings after distribution
    std::span<const StringHandle> strings;
    //! num_buckets + 1 boundaries into strings
    std::span<const std::size_t> bucket_begin;
};

struct S5Config {
    std::size_t max_splitters = 8191;
    std::size_t oversampling = 2;
    //! below: LCP insertion sort
    std::size_t base_threshold = 64;
    //! below: caching multikey quicksort
    std::size_t mkqs_threshold = std::size_t(1) << 20;
    ClassifyVariant variant = ClassifyVariant::unroll;
    std::uint64_t seed = 0x5eed5eed;
    std::function<void(const S5StepInfo&)> on_step;
};

/*!
 * Arrays shared by all subproblems of one run. strings receives the result;
 * shadow, oracle and keys are scratch of the same length. lcp and dchar may be
 * empty.
 */
struct S5Context {
    const CharBuffer* buf = nullptr;
    const S5Config* config = nullptr;
    std::span<StringHandle> strings;
    std::span<StringHandle> shadow;
    std::span<bucket_type> oracle;
    std::span<key_type> keys;
    std::span<std::size_t> lcp;
    std::span<std::uint8_t> dchar;

    //! array holding a subproblem's data
    std::span<StringHandle> data(bool in_shadow) const {
        return in_shadow ? shadow : strings;
    }
};

//! per-bucket smallest and largest key of a classified range
void bucket_extremes(const SplitterTree& tree, std::span<const key_type> keys,
                     std::span<const bucket_type> oracle,
                     std::span<key_type> min_key, std::span<key_type> max_key);

/*!
 * Post-processing of one distributed step over [begin, begin + n) whose data
 * now lies in ctx.data(in_shadow): writes the LCP and distinguishing character
 * at every bucket start except the first, finishes singleton and terminated
 * equality buckets, and calls emit(begin, end, depth) for every bucket that
 * needs further sorting.
 */
void s5_finish_step(const S5Context& ctx, const SplitterTree& tree,
                    std::span<const std::size_t> bucket_begin,
                    std::span<const key_type> min_key,
                    std::span<const key_type> max_key, std::size_t begin,
                    std::size_t depth, bool in_shadow,
                    const std::function<void(std::size_t, std::size_t,
                                             std::size_t)>& emit);

/*!
 * Sort one subproblem [begin,end) sharing depth characters whose data lies in
 * ctx.data(in_shadow), dispatching by size to insertion sort, caching MKQS or
 * sample sort steps. Writes lcp/dchar at positions begin+1..end-1. With a
 * hook, pending subproblems are released oldest-first while workers idle.
 */
void s5_range(const S5Context& ctx, std::size_t begin, std::size_t end,
              std::size_t depth, bool in_shadow, SortCounters& counters,
              const ShareHook* hook = nullptr);

//! scratch for a run over n strings
struct S5Scratch {
    std::vector<StringHandle> shadow;
    std::vector<bucket_type> oracle;
    std::vector<key_type> keys;

    explicit S5Scratch(std::size_t n) : shadow(n), oracle(n), keys(n) { }
};

void s5_sort(const CharBuffer& buf, std::span<StringHandle> strings,
             std::span<std::size_t> lcp, std::span<std::uint8_t> dchar,
             std::size_t depth, const S5Config& config = {},
             SortCounters* counters = nullptr);

StringSet s5_sort(StringSet set, std::size_t depth = 0,
                  const S5Config& config = {});

SortedWithLcp s5_sort_lcp(StringSet set, std::size_t depth = 0,
                          bool with_dchar = false, const S5Config& config = {},
                          SortCounters* counters = nullptr);

} // namespace pss

#endif // !PSS_SAMPLE_SORT_HEADER

/******************************************************************************/
