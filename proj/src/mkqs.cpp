/*******************************************************************************
 * src/mkqs.cpp
 *
 *******************************************************************************
 * Published under the Boost Software License, Version 1.0
 ******************************************************************************/

#include <pss/insertion_sort.hpp>
#include <pss/mkqs.hpp>

#include <algorithm>
#include <array>
#include <deque>
#include <vector>

namespace pss {

namespace {

template <typename T>
T med3(T a, T b, T c) {
    if (a < b) {
        if (b < c) return b;
        return a < c ? c : a;
    }
    if (a < c) return a;
    return b < c ? c : b;
}

/*!
 * Split-end ternary partition of [0,n) by key(x) against pivot. Returns the
 * sizes of the less and greater regions; equal elements end up in the middle.
 */
template <typename T, typename Key, typename P>
std::pair<std::size_t, std::size_t> ternary_partition(T* e, std::size_t n,
                                                      Key key, P pivot) {
    std::ptrdiff_t a = 0, b = 0;
    std::ptrdiff_t c = static_cast<std::ptrdiff_t>(n) - 1, d = c;
    for (;;) {
        while (b <= c) {
            const auto k = key(e[b]);
            if (k > pivot) break;
            if (k == pivot) std::swap(e[a++], e[b]);
            ++b;
        }
        while (b <= c) {
            const auto k = key(e[c]);
            if (k < pivot) break;
            if (k == pivot) std::swap(e[c], e[d--]);
            --c;
        }
        if (b > c) break;
        std::swap(e[b++], e[c--]);
    }
    const std::ptrdiff_t sn = static_cast<std::ptrdiff_t>(n);
    std::ptrdiff_t r = std::min(a, b - a);
    std::swap_ranges(e, e + r, e + b - r);
    r = std::min(d - c, sn - d - 1);
    std::swap_ranges(e + b, e + b + r, e + sn - r);
    return {static_cast<std::size_t>(b - a), static_cast<std::size_t>(d - c)};
}

struct Range {
    std::size_t begin, end, depth;
};

} // namespace

/******************************************************************************/
// Plain multikey quicksort

void mkqs(const CharBuffer& buf, std::span<StringHandle> strings,
          std::size_t depth) {
    std::vector<Range> stack;
    stack.push_back({0, strings.size(), depth});
    while (!stack.empty())
    {
        const Range r = stack.back();
        stack.pop_back();
        const std::size_t n = r.end - r.begin;
        StringHandle* e = strings.data() + r.begin;
        if (n < mkqs_base_threshold) {
            insertion_sort(buf, std::span(e, n), r.depth);
            continue;
        }
        auto ch = [&buf, d = r.depth](StringHandle s) { return buf.at(s, d); };
        const std::uint8_t pivot = med3(ch(e[0]), ch(e[n / 2]), ch(e[n - 1]));
        const auto [nlt, ngt] = ternary_partition(e, n, ch, pivot);
        const std::size_t neq = n - nlt - ngt;

        if (ngt > 1) stack.push_back({r.end - ngt, r.end, r.depth});
        if (pivot != 0 && neq > 1)
            stack.push_back({r.begin + nlt, r.end - ngt, r.depth + 1});
        if (nlt > 1) stack.push_back({r.begin, r.begin + nlt, r.depth});
    }
}

StringSet mkqs(StringSet set, std::size_t depth) {
    mkqs(set.buffer(), set.span(), depth);
    return set;
}

/******************************************************************************/
// Caching multikey quicksort

void mkqs_fill_keys(const CharBuffer& buf, std::span<CachedEntry> entries,
                    std::size_t depth, SortCounters& counters) {
    for (CachedEntry& e : entries)
        e.key = extract_key(buf, e.handle, depth);
    counters.buffer_accesses += entries.size();
}

namespace {

/*!
 * Base case item: characters [depth, cached_end) are available without
 * touching the buffer. Reads beyond extend the cached range in whole blocks of
 * key_width characters, each counted as one buffer access.
 */
struct BaseItem {
    StringHandle handle;
    key_type key;
    std::size_t depth;
    std::size_t cached_end;
};

void cached_base_case(const MkqsCachedContext& ctx, std::size_t begin,
                      std::size_t end, std::size_t depth,
                      SortCounters& counters) {
    const std::size_t n = end - begin;
    std::array<BaseItem, mkqs_base_threshold> items;
    std::array<std::size_t, mkqs_base_threshold> local_lcp;
    for (std::size_t i = 0; i < n; ++i) {
        const CachedEntry& e = ctx.entries[begin + i];
        items[i] = BaseItem{e.handle, e.key, depth, depth + key_width};
    }

    const CharBuffer& buf = *ctx.buf;
    std::uint64_t accesses = 0;
    auto char_at = [&buf, &accesses](BaseItem& it, std::size_t pos) {
        if (pos < it.depth + key_width)
            return key_char(it.key, pos - it.depth);
        if (pos >= it.cached_end) {
            const std::size_t blocks = (pos - it.cached_end) / key_width + 1;
            accesses += blocks;
            it.cached_end += blocks * key_width;
        }
        return buf.at(it.handle, pos);
    };

    const bool with_lcp = !ctx.lcp.empty();
    std::span<std::size_t> lcp =
        with_lcp ? ctx.lcp.subspan(begin, n) : std::span(local_lcp.data(), n);

    counters.char_comparisons += lcp_insertion_sort_items(
        std::span(items.data(), n), lcp, depth, char_at);

    if (!ctx.dchar.empty()) {
        for (std::size_t i = 1; i < n; ++i)
            ctx.dchar[begin + i] = char_at(items[i], lcp[i]);
    }
    for (std::size_t i = 0; i < n; ++i)
        ctx.out[begin + i] = items[i].handle;
    counters.buffer_accesses += accesses;
}

} // namespace

void mkqs_cached_range(const MkqsCachedContext& ctx, std::size_t begin,
                       std::size_t end, std::size_t depth,
                       SortCounters& counters, const ShareHook* hook) {
    const bool with_lcp = !ctx.lcp.empty();
    const bool with_dchar = !ctx.dchar.empty();

    std::deque<Range> stack;
    stack.push_back({begin, end, depth});
    while (!stack.empty())
    {
        if (hook && stack.size() > 1 && hook->should_share()) {
            // release the oldest, largest pending range
            const Range r = stack.front();
            stack.pop_front();
            ++counters.share_events;
            hook->release([ctx, r, hook](SortCounters& c) {
                mkqs_cached_range(ctx, r.begin, r.end, r.depth, c, hook);
            });
            continue;
        }

        const Range r = stack.back();
        stack.pop_back();
        const std::size_t n = r.end - r.begin;
        if (n == 0) continue;
        if (n == 1) {
            ctx.out[r.begin] = ctx.entries[r.begin].handle;
            continue;
        }
        if (n < mkqs_base_threshold) {
            cached_base_case(ctx, r.begin, r.end, r.depth, counters);
            continue;
        }

        CachedEntry* e = ctx.entries.data() + r.begin;
        const key_type pivot = med3(e[0].key, e[n / 2].key, e[n - 1].key);
        const auto [nlt, ngt] = ternary_partition(
            e, n, [](const CachedEntry& x) { return x.key; }, pivot);
        const std::size_t neq = n - nlt - ngt;
        const std::size_t eq_begin = r.begin + nlt;
        const std::size_t gt_begin = r.end - ngt;

        if (with_lcp) {
            if (nlt > 0) {
                key_type lt_max = 0;
                for (std::size_t i = 0; i < nlt; ++i)
                    lt_max = std::max(lt_max, e[i].key);
                const std::size_t h = key_lcp(lt_max, pivot);
                ctx.lcp[eq_begin] = r.depth + h;
                if (with_dchar) ctx.dchar[eq_begin] = key_char(pivot, h);
            }
            if (ngt > 0) {
                key_type gt_min = ~key_type(0);
                for (std::size_t i = n - ngt; i < n; ++i)
                    gt_min = std::min(gt_min, e[i].key);
                const std::size_t h = key_lcp(pivot, gt_min);
                ctx.lcp[gt_begin] = r.depth + h;
                if (with_dchar) ctx.dchar[gt_begin] = key_char(gt_min, h);
            }
        }

        if (ngt > 0) stack.push_back({gt_begin, r.end, r.depth});

        if (key_has_terminator(pivot)) {
            // equal strings: finished
            const std::size_t h = r.depth + key_depth(pivot);
            for (std::size_t i = eq_begin; i < gt_begin; ++i) {
                ctx.out[i] = ctx.entries[i].handle;
                if (i == eq_begin) continue;
                if (with_lcp) ctx.lcp[i] = h;
                if (with_dchar) ctx.dchar[i] = 0;
            }
        }
        else if (neq == 1) {
            ctx.out[eq_begin] = ctx.entries[eq_begin].handle;
        }
        else {
            mkqs_fill_keys(*ctx.buf, ctx.entries.subspan(eq_begin, neq),
                           r.depth + key_width, counters);
            stack.push_back({eq_begin, gt_begin, r.depth + key_width});
        }

        if (nlt > 0) stack.push_back({r.begin, eq_begin, r.depth});
    }
}

void mkqs_cached(const CharBuffer& buf, std::span<StringHandle> strings,
                 std::span<std::size_t> lcp, std::span<std::uint8_t> dchar,
                 std::size_t depth, SortCounters* counters) {
    const std::size_t n = strings.size();
    if (n < 2) return;
    std::vector<CachedEntry> entries(n);
    for (std::size_t i = 0; i < n; ++i) entries[i].handle = strings[i];

    SortCounters local;
    mkqs_fill_keys(buf, entries, depth, local);
    MkqsCachedContext ctx{&buf, entries, strings, lcp, dchar};
    mkqs_cached_range(ctx, 0, n, depth, local);
    if (counters) *counters += local;
}

SortedWithLcp mkqs_cached(StringSet set, std::size_t depth, bool with_dchar,
                          SortCounters* counters) {
    SortedWithLcp out;
    const std::size_t n = set.size();
    out.lcps.values.assign(n, 0);
    if (with_dchar) out.dchar.assign(n, 0);
    mkqs_cached(set.buffer(), set.span(), out.lcps.values, out.dchar, depth,
                counters);
    if (n > 0) {
        out.lcps.values[0] = lcp_undefined;
        if (with_dchar) out.dchar[0] = set.buffer().at(set.handles()[0], 0);
    }
    out.set = std::move(set);
    return out;
}

} // namespace pss

/******************************************************************************/
