/*******************************************************************************
 * include/pss/lcp_merge.hpp
 *
 * LCP-aware string comparison, binary merge and mergesort, K-way merge with an
 * LCP-aware loser tree, a variant caching distinguishing characters, and the
 * heuristic splitting a K-way merge into independent jobs.
 *
 *******************************************************************************
 * Published under the Boost Software License, Version 1.0
 ******************************************************************************/

#ifndef PSS_LCP_MERGE_HEADER
#define PSS_LCP_MERGE_HEADER

#include <pss/counters.hpp>
#include <pss/string_set.hpp>

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace pss {

/******************************************************************************/
// Comparison

/*!
 * Result of comparing (a, s_a, h_a) with (b, s_b, h_b) where h_a, h_b are LCPs
 * with a common predecessor p <= s_a, s_b: winner <= loser and lcp is
 * lcp(s_a, s_b). Ties go to a.
 */
struct LcpCompareResult {
    std::size_t winner;
    std::size_t winner_lcp;
    std::size_t loser;
    std::size_t lcp;
};

//! counts one comparison and one buffer access per character position examined
LcpCompareResult lcp_compare(const CharBuffer& buf, std::size_t a,
                             StringHandle sa, std::size_t ha, std::size_t b,
                             StringHandle sb, std::size_t hb,
                             SortCounters* counters = nullptr);

struct CachedCompareResult {
    LcpCompareResult result;
    //! s_loser[lcp]
    std::uint8_t loser_dchar;
};

/*!
 * As lcp_compare with ca = s_a[h_a] and cb = s_b[h_b] known. The first
 * character position is compared through the cached characters; only further
 * positions are read from the buffer and counted as accesses.
 */
CachedCompareResult lcp_compare_cached(const CharBuffer& buf, std::size_t a,
                                       StringHandle sa, std::size_t ha,
                                       std::uint8_t ca, std::size_t b,
                                       StringHandle sb, std::size_t hb,
                                       std::uint8_t cb,
                                       SortCounters* counters = nullptr);

/******************************************************************************/
// Streams

/*!
 * Sorted handles with their LCP array and optionally distinguishing
 * characters. lcps[i] and dchar[i] relate element i to element i-1 of the same
 * stream; entry 0 is not used by the mergers.
 */
struct LcpStream {
    std::span<const StringHandle> strings;
    std::span<const std::size_t> lcps;
    std::span<const std::uint8_t> dchar;

    std::size_t size() const { return strings.size(); }
};

LcpStream make_stream(const SortedWithLcp& s);

//! merge output arrays; dchar may be empty
struct MergeOutput {
    std::span<StringHandle> strings;
    std::span<std::size_t> lcps;
    std::span<std::uint8_t> dchar;
};

//! half-open index range within one stream
struct StreamRange {
    std::size_t begin = 0, end = 0;

    std::size_t size() const { return end - begin; }
    friend bool operator==(const StreamRange&, const StreamRange&) = default;
};

/******************************************************************************/
// Binary merge and mergesort

/*!
 * Merge two streams sharing depth characters into out. out.lcps[0] receives
 * depth, the rest lcp with the predecessor. With cached, a.dchar/b.dchar must
 * be present and out.dchar is filled.
 */
void binary_lcp_merge(const CharBuffer& buf, const LcpStream& a,
                      const LcpStream& b, const MergeOutput& out,
                      std::size_t depth, bool cached = false,
                      SortCounters* counters = nullptr);

SortedWithLcp binary_lcp_merge(const SortedWithLcp& a, const SortedWithLcp& b,
                               SortCounters* counters = nullptr);

//! top-down binary LCP mergesort
SortedWithLcp binary_lcp_mergesort(StringSet set,
                                   SortCounters* counters = nullptr);

/******************************************************************************/
// K-way merge

/*!
 * LCP-aware loser tree over K streams (padded to a power of two with empty
 * streams). Node i in 1..K-1 stores the loser stream of its game and the LCP of
 * the loser with the game's winner; the overall winner is kept separately.
 * Exhausted streams act as an infinite sentinel that loses every game without
 * character comparisons. Equal strings leave in stream order.
 */
class LoserTree
{
public:
    struct Node {
        std::size_t stream;
        std::size_t lcp;
    };

    /*!
     * ranges select the part of each stream to merge (defaults to whole
     * streams); all selected strings share depth characters. With cached, the
     * streams' dchar arrays are used; the first element's distinguishing
     * character at depth comes from dchar when its stored LCP equals depth,
     * otherwise from one counted buffer read.
     */
    LoserTree(const CharBuffer& buf, std::span<const LcpStream> streams,
              std::size_t depth, bool cached, SortCounters* counters,
              std::span<const StreamRange> ranges = {});

    std::size_t num_slots() const { return k_; }
    bool done() const { return remaining_ == 0; }
    std::size_t remaining() const { return remaining_; }

    //! emit up to max_count winners at out[pos...], returns number emitted
    std::size_t merge(const MergeOutput& out, std::size_t pos,
                      std::size_t max_count);

    //! unmerged part of each input stream
    std::vector<StreamRange> remaining_ranges() const;

    //! node i in 1..K-1
    const Node& node(std::size_t i) const { return nodes_[i]; }
    std::size_t winner() const { return winner_.stream; }
    std::size_t winner_lcp() const { return winner_.lcp; }

    //! current front of stream k, or nullopt if exhausted
    std::optional<StringHandle> front(std::size_t k) const;

    //! games played so far
    std::uint64_t games() const { return games_; }

private:
    Node play(Node a, Node b);
    bool exhausted(std::size_t k) const;

    const CharBuffer& buf_;
    std::span<const LcpStream> streams_;
    std::size_t depth_;
    bool cached_;
    SortCounters* counters_;
    std::size_t k_;

    std::vector<StreamRange> ranges_;
    std::vector<std::size_t> cur_;
    std::vector<std::uint8_t> cache_;
    std::vector<Node> nodes_;
    Node winner_{0, 0};
    Node last_loser_{0, 0};
    std::size_t remaining_ = 0;
    std::uint64_t games_ = 0;
};

/*!
 * Merge K streams sharing depth characters. K = 1 copies, K = 2 uses the
 * binary merge, larger K the loser tree.
 */
void kway_lcp_merge(const CharBuffer& buf, std::span<const LcpStream> streams,
                    const MergeOutput& out, std::size_t depth,
                    bool cached = false, SortCounters* counters = nullptr);

SortedWithLcp kway_lcp_merge(std::span<const SortedWithLcp> parts,
                             bool cached = false,
                             SortCounters* counters = nullptr);

/******************************************************************************/
// Merge jobs

/*!
 * Independent piece of a K-way merge: a range of each stream; all contained
 * strings share depth characters and the job's output starts at out_begin.
 * When boundary_known, boundary_lcp and boundary_dchar relate the first output
 * string to the last output string of the preceding job.
 */
struct MergeJob {
    std::vector<StreamRange> ranges;
    std::size_t depth = 0;
    std::size_t out_begin = 0;
    bool boundary_known = false;
    std::size_t boundary_lcp = 0;
    std::uint8_t boundary_dchar = 0;

    std::size_t size() const;
};

struct SplitOptions {
    std::size_t target_jobs = 8;
    std::size_t initial_width = key_width;
};

/*!
 * Scan the fronts of the given stream ranges, all sharing depth characters:
 * the streams whose front block of w characters is smallest contribute all
 * following strings with the same block to one job. w starts at
 * initial_width and halves whenever the emitted job count exceeds
 * 2 * target_jobs times the consumed fraction of strings. Each front block
 * read counts as one buffer access, as does each equality check of a
 * terminated block unless the stream carries distinguishing characters.
 */
std::vector<MergeJob> split_merge_jobs(const CharBuffer& buf,
                                       std::span<const LcpStream> streams,
                                       std::span<const StreamRange> ranges,
                                       std::size_t depth, std::size_t out_begin,
                                       const SplitOptions& options,
                                       SortCounters* counters = nullptr);

//! split whole streams starting at output position 0
std::vector<MergeJob> split_merge_jobs(const CharBuffer& buf,
                                       std::span<const LcpStream> streams,
                                       std::size_t depth,
                                       const SplitOptions& options,
                                       SortCounters* counters = nullptr);

//! run one job to completion
void run_merge_job(const CharBuffer& buf, std::span<const LcpStream> streams,
                   const MergeJob& job, const MergeOutput& out, bool cached,
                   SortCounters* counters = nullptr);

/*!
 * Set lcps/dchar at output position pos >= 1 by comparing with position pos-1
 * from character from onward; counts one buffer access per position examined.
 */
void fix_boundary_lcp(const CharBuffer& buf, const MergeOutput& out,
                      std::size_t pos, std::size_t from,
                      SortCounters* counters = nullptr);

} // namespace pss

#endif // !PSS_LCP_MERGE_HEADER

/******************************************************************************/
