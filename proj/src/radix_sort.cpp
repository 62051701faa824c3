/*******************************************************************************
 * src/radix_sort.cpp
 *
 *******************************************************************************
 * Published under the Boost Software License, Version 1.0
 ******************************************************************************/

#include <pss/insertion_sort.hpp>
#include <pss/radix_sort.hpp>

#include <algorithm>
#include <array>
#include <deque>

namespace pss {

namespace {

struct Range {
    std::size_t begin, end, depth;
};

} // namespace

/******************************************************************************/
// 8-bit in-place

void radix8_range(const Radix8Context& ctx, std::size_t begin, std::size_t end,
                  std::size_t depth, SortCounters& counters,
                  const ShareHook* hook) {
    const CharBuffer& buf = *ctx.buf;
    std::uint64_t reads = 0;
    auto read = [&](StringHandle s, std::size_t pos) {
        ++reads;
        if (ctx.observer) (*ctx.observer)(s, pos);
        return buf.at(s, pos);
    };

    std::deque<Range> stack;
    stack.push_back({begin, end, depth});
    while (!stack.empty())
    {
        if (hook && stack.size() > 1 && hook->should_share()) {
            const Range r = stack.front();
            stack.pop_front();
            ++counters.share_events;
            hook->release([ctx, r, hook](SortCounters& c) {
                radix8_range(ctx, r.begin, r.end, r.depth, c, hook);
            });
            continue;
        }

        const Range r = stack.back();
        stack.pop_back();
        const std::size_t n = r.end - r.begin;
        StringHandle* s = ctx.strings.data() + r.begin;

        if (n < radix_base_threshold) {
            std::array<std::size_t, radix_base_threshold> lcp;
            counters.char_comparisons += lcp_insertion_sort_items(
                std::span(s, n), std::span(lcp.data(), n), r.depth, read);
            continue;
        }

        std::array<std::size_t, 256> count{};
        for (std::size_t i = 0; i < n; ++i) ++count[read(s[i], r.depth)];

        std::array<std::size_t, 256> next, stop;
        std::size_t sum = 0;
        for (std::size_t k = 0; k < 256; ++k) {
            next[k] = sum;
            sum += count[k];
            stop[k] = sum;
        }

        // cycle-walking permutation
        for (std::size_t k = 0; k < 256; ++k) {
            while (next[k] < stop[k]) {
                StringHandle v = s[next[k]];
                std::uint8_t c = read(v, r.depth);
                while (c != k) {
                    std::swap(v, s[next[c]++]);
                    c = read(v, r.depth);
                }
                s[next[k]++] = v;
            }
        }

        // bucket 0 holds finished strings
        for (std::size_t k = 256; k-- > 1;) {
            if (count[k] > 1)
                stack.push_back({r.begin + stop[k] - count[k],
                                 r.begin + stop[k], r.depth + 1});
        }
    }
    counters.buffer_accesses += reads;
}

void radix8_inplace(const CharBuffer& buf, std::span<StringHandle> strings,
                    std::size_t depth, SortCounters* counters,
                    const ReadObserver* observer) {
    SortCounters local;
    Radix8Context ctx{&buf, strings, observer};
    radix8_range(ctx, 0, strings.size(), depth, local);
    if (counters) *counters += local;
}

StringSet radix8_inplace(StringSet set, std::size_t depth) {
    radix8_inplace(set.buffer(), set.span(), depth);
    return set;
}

/******************************************************************************/
// adaptive 16/8-bit out-of-place

void radix16_adaptive(const CharBuffer& buf, std::span<StringHandle> strings,
                      std::span<StringHandle> scratch, std::size_t depth,
                      SortCounters* counters, const Radix16Options& options) {
    const std::size_t n = strings.size();
    SortCounters local;

    struct Task {
        std::size_t begin, end, depth;
        bool in_original;
    };
    auto array = [&](bool original) {
        return original ? strings : scratch.first(n);
    };

    std::vector<std::uint16_t> oracle;
    std::vector<std::size_t> count;
    std::vector<Task> stack;
    stack.push_back({0, n, depth, true});

    while (!stack.empty())
    {
        const Task t = stack.back();
        stack.pop_back();
        const std::size_t m = t.end - t.begin;
        std::span<StringHandle> src = array(t.in_original).subspan(t.begin, m);
        std::span<StringHandle> dst = array(!t.in_original).subspan(t.begin, m);

        if (m < options.threshold) {
            if (options.trace)
                options.trace->push_back({t.begin, t.end, t.depth, 8});
            if (m > 1) radix8_inplace(buf, src, t.depth, &local);
            if (!t.in_original) std::copy(src.begin(), src.end(), dst.begin());
            continue;
        }
        if (options.trace)
            options.trace->push_back({t.begin, t.end, t.depth, 16});

        if (oracle.size() < n) oracle.resize(n);
        count.assign(65536, 0);
        for (std::size_t i = 0; i < m; ++i) {
            const std::uint16_t d = radix16_digit(buf, src[i], t.depth);
            local.buffer_accesses += (d >> 8) ? 2 : 1;
            oracle[i] = d;
            ++count[d];
        }

        // exclusive prefix sums, then stable distribution
        std::size_t sum = 0;
        for (std::size_t& c : count) {
            const std::size_t size = c;
            c = sum;
            sum += size;
        }
        for (std::size_t i = 0; i < m; ++i)
            dst[count[oracle[i]]++] = src[i];

        // count[k] is now the end of bucket k
        std::size_t start = 0;
        for (std::size_t k = 0; k < 65536; ++k) {
            const std::size_t size = count[k] - start;
            if (size == 0) continue;
            const std::size_t b = t.begin + start;
            const bool final = (k & 0xFF) == 0 || size == 1;
            if (final) {
                // data now lives in dst; move it home if dst is scratch
                if (t.in_original)
                    std::copy(scratch.begin() + b, scratch.begin() + b + size,
                              strings.begin() + b);
            }
            else {
                stack.push_back({b, b + size, t.depth + 2, !t.in_original});
            }
            start = count[k];
        }
    }
    if (counters) *counters += local;
}

StringSet radix16_adaptive(StringSet set, std::size_t depth,
                           const Radix16Options& options) {
    std::vector<StringHandle> scratch(set.size());
    radix16_adaptive(set.buffer(), set.span(), scratch, depth, nullptr, options);
    return set;
}

} // namespace pss

/******************************************************************************/
