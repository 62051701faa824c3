/*******************************************************************************
 * include/pss/mkqs.hpp
 *
 * Multikey quicksort: plain character-wise version and the caching variant
 * which partitions by whole word keys.
 *
 *******************************************************************************
 * Published under the Boost Software License, Version 1.0
 ******************************************************************************/

#ifndef PSS_MKQS_HEADER
#define PSS_MKQS_HEADER

#include <pss/counters.hpp>
#include <pss/share.hpp>
#include <pss/string_set.hpp>

#include <cstdint>
#include <span>

namespace pss {

//! below this size, ranges go to insertion sort
inline constexpr std::size_t mkqs_base_threshold = 64;

void mkqs(const CharBuffer& buf, std::span<StringHandle> strings,
          std::size_t depth);

StringSet mkqs(StringSet set, std::size_t depth = 0);

//! handle plus the key_width characters at the current depth
struct CachedEntry {
    StringHandle handle;
    key_type key = 0;
};

/*!
 * Arrays shared by all subproblems of one caching MKQS run. Ranges are
 * absolute indices into entries; finished ranges write their handles to out
 * at the same indices. lcp and dchar may be empty to skip LCP output.
 */
struct MkqsCachedContext {
    const CharBuffer* buf = nullptr;
    std::span<CachedEntry> entries;
    std::span<StringHandle> out;
    std::span<std::size_t> lcp;
    std::span<std::uint8_t> dchar;
};

//! load keys at depth for a range, counting one buffer access per entry
void mkqs_fill_keys(const CharBuffer& buf, std::span<CachedEntry> entries,
                    std::size_t depth, SortCounters& counters);

/*!
 * Sort entries[begin,end), all sharing depth characters, whose keys hold the
 * characters at depth. Writes lcp and dchar for positions begin+1..end-1; the
 * entry at begin is left to the caller. With a hook, pending ranges are
 * released oldest-first while other workers are idle.
 */
void mkqs_cached_range(const MkqsCachedContext& ctx, std::size_t begin,
                       std::size_t end, std::size_t depth,
                       SortCounters& counters,
                       const ShareHook* hook = nullptr);

//! Sort a handle range; keys are loaded unless strings.size() < 2.
void mkqs_cached(const CharBuffer& buf, std::span<StringHandle> strings,
                 std::span<std::size_t> lcp, std::span<std::uint8_t> dchar,
                 std::size_t depth, SortCounters* counters = nullptr);

SortedWithLcp mkqs_cached(StringSet set, std::size_t depth = 0,
                          bool with_dchar = false,
                          SortCounters* counters = nullptr);

} // namespace pss

#endif // !PSS_MKQS_HEADER

/******************************************************************************/
