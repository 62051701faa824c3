/*******************************************************************************
 * include/pss/insertion_sort.hpp
 *
 * Insertion sorts used as recursion base cases: plain string insertion sort and
 * LCP-aware insertion sort which also outputs the LCP array.
 *
 *******************************************************************************
 * Published under the Boost Software License, Version 1.0
 ******************************************************************************/

#ifndef PSS_INSERTION_SORT_HEADER
#define PSS_INSERTION_SORT_HEADER

#include <pss/counters.hpp>
#include <pss/string_set.hpp>

#include <cstdint>
#include <span>
#include <utility>

namespace pss {

/*!
 * LCP-aware insertion sort over arbitrary items. char_at(item, pos) returns
 * the character of the item's string at pos. All items share a common prefix
 * of length depth.
 *
 * On return lcp[i] = lcp(items[i-1], items[i]) for 1 <= i < n; lcp[0] is not
 * touched. Returns the number of ternary character comparisons, counted once
 * per evaluation of the character loop condition.
 *
 * Invariant while scanning with the hole at position i: lcp[i] holds the LCP
 * of items[i-1] with the item right of the hole, and new_lcp the LCP of the
 * candidate with that item.
 */
template <typename Item, typename CharAt>
std::uint64_t lcp_insertion_sort_items(std::span<Item> items,
                                       std::span<std::size_t> lcp,
                                       std::size_t depth, CharAt&& char_at) {
    const std::size_t n = items.size();
    std::uint64_t cmp = 0;

    for (std::size_t j = 0; j < n; ++j)
    {
        Item x = std::move(items[j]);
        std::size_t new_lcp = depth;
        std::size_t i = j;

        while (i > 0)
        {
            const std::size_t prev_lcp = new_lcp;
            const std::size_t cur_lcp = lcp[i];

            if (cur_lcp < new_lcp) {
                // LCP decreases: a smaller string precedes, insert here
                break;
            }
            else if (cur_lcp == new_lcp) {
                // equal LCP: compare more characters
                Item& prev = items[i - 1];
                std::uint8_t c1 = char_at(x, new_lcp);
                std::uint8_t c2 = char_at(prev, new_lcp);
                ++cmp;
                while (c1 != 0 && c1 == c2) {
                    ++new_lcp;
                    c1 = char_at(x, new_lcp);
                    c2 = char_at(prev, new_lcp);
                    ++cmp;
                }
                if (c1 >= c2) {
                    // x is larger: insert after prev, lcp[i+1] set below
                    lcp[i] = new_lcp;
                    new_lcp = prev_lcp;
                    break;
                }
            }
            // larger LCP: x is smaller without comparing characters

            items[i] = std::move(items[i - 1]);
            if (i + 1 < n) lcp[i + 1] = cur_lcp;
            --i;
        }

        items[i] = std::move(x);
        if (i + 1 < n) lcp[i + 1] = new_lcp;
    }

    return cmp;
}

//! Insertion sort by full string comparison starting at depth.
void insertion_sort(const CharBuffer& buf, std::span<StringHandle> strings,
                    std::size_t depth);

StringSet insertion_sort(StringSet set, std::size_t depth = 0);

//! LCP insertion sort writing lcp[1..n); lcp.size() must equal strings.size().
void lcp_insertion_sort(const CharBuffer& buf, std::span<StringHandle> strings,
                        std::span<std::size_t> lcp, std::size_t depth,
                        SortCounters* counters = nullptr);

//! As above, also caching distinguishing characters into dchar[1..n).
void lcp_insertion_sort(const CharBuffer& buf, std::span<StringHandle> strings,
                        std::span<std::size_t> lcp,
                        std::span<std::uint8_t> dchar, std::size_t depth,
                        SortCounters* counters = nullptr);

SortedWithLcp lcp_insertion_sort(StringSet set, std::size_t depth = 0,
                                 bool with_dchar = false,
                                 SortCounters* counters = nullptr);

//! dchar[i] = s_i[lcp[i]] for 1 <= i < n
void fill_dchar(const CharBuffer& buf, std::span<const StringHandle> strings,
                std::span<const std::size_t> lcp,
                std::span<std::uint8_t> dchar);

} // namespace pss

#endif // !PSS_INSERTION_SORT_HEADER

/******************************************************************************/
