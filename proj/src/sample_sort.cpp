/*******************************************************************************
 * src/sample_sort.cpp
 *
 *******************************************************************************
 * Published under the Boost Software License, Version 1.0
 ******************************************************************************/

#include <pss/insertion_sort.hpp>
#include <pss/mkqs.hpp>
#include <pss/sample_sort.hpp>

#include <algorithm>
#include <bit>
#include <deque>
#include <random>
#include <stdexcept>

namespace pss {

/******************************************************************************/
// SplitterTree

SplitterTree::SplitterTree(std::vector<key_type> inorder)
    : inorder_(std::move(inorder)) {
    const std::size_t v = inorder_.size();
    if (v == 0 || !std::has_single_bit(v + 1) || v > max_splitters_limit)
        throw std::invalid_argument("SplitterTree: size must be 2^d - 1");
    levels_ = static_cast<std::size_t>(std::countr_zero(v + 1));

    std::vector<std::size_t> leftmost(v);
    for (std::size_t j = 0; j < v; ++j)
        leftmost[j] = (j > 0 && inorder_[j - 1] == inorder_[j]) ? leftmost[j - 1] : j;

    tree_.assign(v + 1, 0);
    node_eq_bucket_.assign(v + 1, 0);
    auto build = [&](auto& self, std::size_t node, std::size_t lo,
                     std::size_t hi) -> void {
        const std::size_t mid = (lo + hi) / 2;
        tree_[node] = inorder_[mid];
        node_eq_bucket_[node] = static_cast<bucket_type>(2 * leftmost[mid] + 1);
        if (hi - lo > 1) {
            self(self, 2 * node, lo, mid);
            self(self, 2 * node + 1, mid + 1, hi);
        }
    };
    build(build, 1, 0, v);

    slcp_.assign(v + 1, 0);
    for (std::size_t j = 1; j < v; ++j) {
        const key_type a = inorder_[j - 1], b = inorder_[j];
        // equal splitters ending in a terminator share only their length
        const std::size_t h = (a == b && key_has_terminator(a)) ? key_depth(a)
                                                                 : key_lcp(a, b);
        slcp_[j] = static_cast<std::uint8_t>(h);
    }
}

std::size_t SplitterTree::classify_unroll(key_type key) const {
    std::size_t i = 1;
    for (std::size_t l = 0; l < levels_; ++l)
        i = 2 * i + (key > tree_[i]);
    const std::size_t j = i - (inorder_.size() + 1);
    return 2 * j + (j < inorder_.size() && inorder_[j] == key);
}

std::size_t SplitterTree::classify_equal(key_type key) const {
    std::size_t i = 1;
    for (std::size_t l = 0; l < levels_; ++l) {
        const key_type t = tree_[i];
        if (key == t) return node_eq_bucket_[i];
        i = 2 * i + (key > t);
    }
    return 2 * (i - (inorder_.size() + 1));
}

std::size_t SplitterTree::bucket_lcp(std::size_t bucket) const {
    if (bucket % 2 == 0) return slcp_[bucket / 2];
    const std::size_t j = bucket / 2;
    return equality_final(j) ? key_depth(inorder_[j]) : key_width;
}

/******************************************************************************/
// Sampling and splitter selection

std::vector<key_type> draw_sample(const CharBuffer& buf,
                                  std::span<const StringHandle> strings,
                                  std::size_t depth, std::size_t v,
                                  std::size_t alpha, std::uint64_t seed) {
    const std::size_t n = strings.size();
    const std::size_t count = v * alpha + alpha - 1;
    std::vector<key_type> sample(count);
    if (n == 0) return sample;

    std::seed_seq seq{static_cast<std::uint32_t>(seed),
                      static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(n),
                      static_cast<std::uint32_t>(depth)};
    std::mt19937_64 rng(seq);
    std::uniform_int_distribution<std::size_t> pick(0, n - 1);
    for (key_type& k : sample)
        k = extract_key(buf, strings[pick(rng)], depth);
    std::sort(sample.begin(), sample.end());
    return sample;
}

SplitterTree select_splitters(std::span<const key_type> sample, std::size_t v) {
    if (sample.empty())
        throw std::invalid_argument("select_splitters: empty sample");
    std::vector<key_type> inorder(v);
    auto select = [&](auto& self, std::size_t lo, std::size_t hi, std::size_t a,
                      std::size_t b, key_type fallback) -> void {
        if (lo >= hi) return;
        if (a >= b) {
            std::fill(inorder.begin() + lo, inorder.begin() + hi, fallback);
            return;
        }
        const std::size_t mid = (lo + hi) / 2;
        const std::size_t m = (a + b) / 2;
        const key_type x = sample[m];
        inorder[mid] = x;
        std::size_t left_end = m;
        while (left_end > a && sample[left_end - 1] == x) --left_end;
        std::size_t right_begin = m + 1;
        while (right_begin < b && sample[right_begin] == x) ++right_begin;
        self(self, lo, mid, a, left_end, x);
        self(self, mid + 1, hi, right_begin, b, x);
    };
    select(select, 0, v, 0, sample.size(), sample[sample.size() / 2]);
    return SplitterTree(std::move(inorder));
}

std::size_t splitter_count_for(std::size_t n, std::size_t cap) {
    const std::size_t limit =
        std::max<std::size_t>(1, std::min({cap, n / 2, max_splitters_limit}));
    std::size_t v = 1;
    while (2 * v + 1 <= limit) v = 2 * v + 1;
    return v;
}

/******************************************************************************/
// Classification and distribution

void classify(const SplitterTree& tree, std::span<const key_type> keys,
              std::span<bucket_type> oracle, ClassifyVariant variant) {
    const std::size_t n = keys.size();
    if (variant == ClassifyVariant::equal) {
        for (std::size_t i = 0; i < n; ++i)
            oracle[i] = static_cast<bucket_type>(tree.classify_equal(keys[i]));
        return;
    }

    // three independent descents in flight
    const key_type* t = tree.tree().data();
    const key_type* in = tree.inorder().data();
    const std::size_t v = tree.num_splitters();
    const std::size_t levels = tree.levels();
    auto finish = [&](std::size_t i, key_type key) {
        const std::size_t j = i - (v + 1);
        return static_cast<bucket_type>(2 * j + (j < v && in[j] == key));
    };

    std::size_t i = 0;
    for (; i + 3 <= n; i += 3) {
        const key_type k0 = keys[i], k1 = keys[i + 1], k2 = keys[i + 2];
        std::size_t j0 = 1, j1 = 1, j2 = 1;
        for (std::size_t l = 0; l < levels; ++l) {
            j0 = 2 * j0 + (k0 > t[j0]);
            j1 = 2 * j1 + (k1 > t[j1]);
            j2 = 2 * j2 + (k2 > t[j2]);
        }
        oracle[i] = finish(j0, k0);
        oracle[i + 1] = finish(j1, k1);
        oracle[i + 2] = finish(j2, k2);
    }
    for (; i < n; ++i)
        oracle[i] = static_cast<bucket_type>(tree.classify_unroll(keys[i]));
}

void distribute(std::span<const StringHandle> src,
                std::span<const bucket_type> oracle, std::size_t num_buckets,
                std::span<StringHandle> dst,
                std::span<std::size_t> bucket_begin) {
    std::fill(bucket_begin.begin(), bucket_begin.begin() + num_buckets + 1, 0);
    for (std::size_t i = 0; i < src.size(); ++i) ++bucket_begin[oracle[i] + 1];
    for (std::size_t k = 1; k <= num_buckets; ++k)
        bucket_begin[k] += bucket_begin[k - 1];

    std::vector<std::size_t> pos(bucket_begin.begin(),
                                 bucket_begin.begin() + num_buckets);
    for (std::size_t i = 0; i < src.size(); ++i)
        dst[pos[oracle[i]]++] = src[i];
}

void bucket_extremes(const SplitterTree& tree, std::span<const key_type> keys,
                     std::span<const bucket_type> oracle,
                     std::span<key_type> min_key, std::span<key_type> max_key) {
    const std::size_t nb = tree.num_buckets();
    std::fill(min_key.begin(), min_key.begin() + nb, ~key_type(0));
    std::fill(max_key.begin(), max_key.begin() + nb, key_type(0));
    for (std::size_t i = 0; i < keys.size(); ++i) {
        const bucket_type b = oracle[i];
        min_key[b] = std::min(min_key[b], keys[i]);
        max_key[b] = std::max(max_key[b], keys[i]);
    }
}

/******************************************************************************/
// Recursive driver

void s5_finish_step(const S5Context& ctx, const SplitterTree& tree,
                    std::span<const std::size_t> bucket_begin,
                    std::span<const key_type> min_key,
                    std::span<const key_type> max_key, std::size_t begin,
                    std::size_t depth, bool in_shadow,
                    const std::function<void(std::size_t, std::size_t,
                                             std::size_t)>& emit) {
    const bool with_lcp = !ctx.lcp.empty();
    const bool with_dchar = !ctx.dchar.empty();
    std::span<StringHandle> data = ctx.data(in_shadow);

    bool have_prev = false;
    key_type prev_max = 0;
    for (std::size_t k = 0; k < tree.num_buckets(); ++k)
    {
        const std::size_t b = begin + bucket_begin[k];
        const std::size_t e = begin + bucket_begin[k + 1];
        if (b == e) continue;

        if (with_lcp) {
            if (have_prev) {
                const std::size_t h = key_lcp(prev_max, min_key[k]);
                ctx.lcp[b] = depth + h;
                if (with_dchar) ctx.dchar[b] = key_char(min_key[k], h);
            }
            have_prev = true;
            prev_max = max_key[k];
        }

        const bool final_eq = k % 2 == 1 && tree.equality_final(k / 2);
        if (final_eq || e - b == 1) {
            if (in_shadow)
                std::copy(data.begin() + b, data.begin() + e,
                          ctx.strings.begin() + b);
            if (final_eq) {
                const std::size_t h = depth + tree.bucket_lcp(k);
                for (std::size_t i = b + 1; i < e; ++i) {
                    if (with_lcp) ctx.lcp[i] = h;
                    if (with_dchar) ctx.dchar[i] = 0;
                }
            }
            continue;
        }
        emit(b, e, depth + tree.bucket_lcp(k));
    }
}

namespace {

struct Task {
    std::size_t begin, end, depth;
    bool in_shadow;
};

//! entries of a caching MKQS subproblem, kept alive by released jobs
struct MkqsState {
    std::vector<CachedEntry> entries;
    ShareHook hook;
};

void run_mkqs(const S5Context& ctx, const Task& t, SortCounters& counters,
              const ShareHook* hook) {
    const std::size_t m = t.end - t.begin;
    std::span<StringHandle> data = ctx.data(t.in_shadow).subspan(t.begin, m);

    auto state = std::make_shared<MkqsState>();
    state->entries.resize(m);
    for (std::size_t i = 0; i < m; ++i) state->entries[i].handle = data[i];
    mkqs_fill_keys(*ctx.buf, state->entries, t.depth, counters);

    MkqsCachedContext mctx{
        ctx.buf, state->entries, ctx.strings.subspan(t.begin, m),
        ctx.lcp.empty() ? ctx.lcp : ctx.lcp.subspan(t.begin, m),
        ctx.dchar.empty() ? ctx.dchar : ctx.dchar.subspan(t.begin, m)};

    if (!hook) {
        mkqs_cached_range(mctx, 0, m, t.depth, counters);
        return;
    }
    state->hook.idle = hook->idle;
    std::weak_ptr<MkqsState> weak = state;
    state->hook.release = [hook, weak](SharedJob job) {
        hook->release([job = std::move(job), keep = weak.lock()](SortCounters& c) {
            job(c);
        });
    };
    mkqs_cached_range(mctx, 0, m, t.depth, counters, &state->hook);
}

void run_base_case(const S5Context& ctx, const Task& t, SortCounters& counters,
                   std::vector<std::size_t>& lcp_scratch) {
    const std::size_t m = t.end - t.begin;
    std::span<StringHandle> data = ctx.data(t.in_shadow).subspan(t.begin, m);
    std::span<std::size_t> lcp;
    if (!ctx.lcp.empty()) {
        lcp = ctx.lcp.subspan(t.begin, m);
    }
    else {
        lcp_scratch.resize(std::max(lcp_scratch.size(), m));
        lcp = std::span(lcp_scratch).first(m);
    }
    lcp_insertion_sort(*ctx.buf, data, lcp, t.depth, &counters);
    if (!ctx.dchar.empty()) {
        fill_dchar(*ctx.buf, data, lcp, ctx.dchar.subspan(t.begin, m));
        counters.buffer_accesses += m - 1;
    }
    if (t.in_shadow)
        std::copy(data.begin(), data.end(), ctx.strings.begin() + t.begin);
}

} // namespace

void s5_range(const S5Context& ctx, std::size_t begin, std::size_t end,
              std::size_t depth, bool in_shadow, SortCounters& counters,
              const ShareHook* hook) {
    const S5Config& cfg = *ctx.config;
    const bool with_lcp = !ctx.lcp.empty();

    std::deque<Task> stack;
    stack.push_back({begin, end, depth, in_shadow});
    std::vector<std::size_t> lcp_scratch, bucket_begin;
    std::vector<key_type> min_key, max_key;

    while (!stack.empty())
    {
        if (hook && stack.size() > 1 && hook->should_share()) {
            const Task r = stack.front();
            stack.pop_front();
            ++counters.share_events;
            hook->release([ctx, r, hook](SortCounters& c) {
                s5_range(ctx, r.begin, r.end, r.depth, r.in_shadow, c, hook);
            });
            continue;
        }

        const Task t = stack.back();
        stack.pop_back();
        const std::size_t m = t.end - t.begin;

        if (m <= 1) {
            if (m == 1 && t.in_shadow) ctx.strings[t.begin] = ctx.shadow[t.begin];
            continue;
        }
        if (m < cfg.base_threshold) {
            run_base_case(ctx, t, counters, lcp_scratch);
            continue;
        }
        if (m < cfg.mkqs_threshold) {
            run_mkqs(ctx, t, counters, hook);
            continue;
        }

        // one sample sort step
        std::span<StringHandle> data = ctx.data(t.in_shadow).subspan(t.begin, m);
        std::span<StringHandle> other = ctx.data(!t.in_shadow).subspan(t.begin, m);
        std::span<key_type> keys = ctx.keys.subspan(t.begin, m);
        std::span<bucket_type> oracle = ctx.oracle.subspan(t.begin, m);

        const std::size_t v = splitter_count_for(m, cfg.max_splitters);
        const std::vector<key_type> sample = draw_sample(
            *ctx.buf, data, t.depth, v, cfg.oversampling, cfg.seed);
        counters.buffer_accesses += sample.size();
        const SplitterTree tree = select_splitters(sample, v);
        const std::size_t nb = tree.num_buckets();

        for (std::size_t i = 0; i < m; ++i)
            keys[i] = extract_key(*ctx.buf, data[i], t.depth);
        counters.buffer_accesses += m;

        classify(tree, keys, oracle, cfg.variant);
        bucket_begin.resize(nb + 1);
        distribute(data, oracle, nb, other, bucket_begin);

        if (cfg.on_step)
            cfg.on_step(S5StepInfo{ctx.buf, t.depth, &tree, other, bucket_begin});

        if (with_lcp) {
            min_key.resize(nb);
            max_key.resize(nb);
            bucket_extremes(tree, keys, oracle, min_key, max_key);
        }
        s5_finish_step(ctx, tree, bucket_begin, min_key, max_key, t.begin,
                       t.depth, !t.in_shadow,
                       [&](std::size_t b, std::size_t e, std::size_t d) {
                           stack.push_back({b, e, d, !t.in_shadow});
                       });
    }
}

void s5_sort(const CharBuffer& buf, std::span<StringHandle> strings,
             std::span<std::size_t> lcp, std::span<std::uint8_t> dchar,
             std::size_t depth, const S5Config& config,
             SortCounters* counters) {
    const std::size_t n = strings.size();
    S5Scratch scratch(n >= config.mkqs_threshold ? n : 0);
    S5Context ctx{&buf,           &config,       strings, scratch.shadow,
                  scratch.oracle, scratch.keys, lcp,     dchar};
    SortCounters local;
    s5_range(ctx, 0, n, depth, false, local);
    if (counters) *counters += local;
}

StringSet s5_sort(StringSet set, std::size_t depth, const S5Config& config) {
    s5_sort(set.buffer(), set.span(), {}, {}, depth, config);
    return set;
}

SortedWithLcp s5_sort_lcp(StringSet set, std::size_t depth, bool with_dchar,
                          const S5Config& config, SortCounters* counters) {
    SortedWithLcp out;
    const std::size_t n = set.size();
    out.lcps.values.assign(n, 0);
    if (with_dchar) out.dchar.assign(n, 0);
    s5_sort(set.buffer(), set.span(), out.lcps.values, out.dchar, depth,
            config, counters);
    if (n > 0) {
        out.lcps.values[0] = lcp_undefined;
        if (with_dchar) out.dchar[0] = set.buffer().at(set.handles()[0], 0);
    }
    out.set = std::move(set);
    return out;
}

} // namespace pss

/******************************************************************************/
