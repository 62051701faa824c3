/*******************************************************************************
 * src/insertion_sort.cpp
 *
 *******************************************************************************
 * Published under the Boost Software License, Version 1.0
 ******************************************************************************/

#include <pss/insertion_sort.hpp>

namespace pss {

void insertion_sort(const CharBuffer& buf, std::span<StringHandle> strings,
                    std::size_t depth) {
    const std::size_t n = strings.size();
    for (std::size_t j = 1; j < n; ++j)
    {
        const StringHandle x = strings[j];
        const std::uint8_t* xs = buf.chars(x) + depth;
        std::size_t i = j;
        while (i > 0)
        {
            const std::uint8_t* ps = buf.chars(strings[i - 1]) + depth;
            std::size_t k = 0;
            while (xs[k] != 0 && xs[k] == ps[k]) ++k;
            if (ps[k] <= xs[k]) break;
            strings[i] = strings[i - 1];
            --i;
        }
        strings[i] = x;
    }
}

StringSet insertion_sort(StringSet set, std::size_t depth) {
    insertion_sort(set.buffer(), set.span(), depth);
    return set;
}

void lcp_insertion_sort(const CharBuffer& buf, std::span<StringHandle> strings,
                        std::span<std::size_t> lcp, std::size_t depth,
                        SortCounters* counters) {
    const std::uint64_t cmp = lcp_insertion_sort_items(
        strings, lcp, depth,
        [&buf](StringHandle s, std::size_t pos) { return buf.at(s, pos); });
    if (counters) counters->char_comparisons += cmp;
}

void lcp_insertion_sort(const CharBuffer& buf, std::span<StringHandle> strings,
                        std::span<std::size_t> lcp,
                        std::span<std::uint8_t> dchar, std::size_t depth,
                        SortCounters* counters) {
    lcp_insertion_sort(buf, strings, lcp, depth, counters);
    fill_dchar(buf, strings, lcp, dchar);
}

SortedWithLcp lcp_insertion_sort(StringSet set, std::size_t depth,
                                 bool with_dchar, SortCounters* counters) {
    SortedWithLcp out;
    const std::size_t n = set.size();
    out.lcps.values.assign(n, 0);
    if (n > 0) out.lcps.values[0] = lcp_undefined;
    if (with_dchar) {
        out.dchar.assign(n, 0);
        lcp_insertion_sort(set.buffer(), set.span(), out.lcps.values,
                           out.dchar, depth, counters);
        if (n > 0) out.dchar[0] = set.buffer().at(set.handles()[0], 0);
    }
    else {
        lcp_insertion_sort(set.buffer(), set.span(), out.lcps.values, depth,
                           counters);
    }
    out.set = std::move(set);
    return out;
}

void fill_dchar(const CharBuffer& buf, std::span<const StringHandle> strings,
                std::span<const std::size_t> lcp,
                std::span<std::uint8_t> dchar) {
    for (std::size_t i = 1; i < strings.size(); ++i)
        dchar[i] = buf.at(strings[i], lcp[i]);
}

} // namespace pss

/******************************************************************************/
