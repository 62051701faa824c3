/*******************************************************************************
 * src/parallel.cpp
 *
 *******************************************************************************
 * Published under the Boost Software License, Version 1.0
 ******************************************************************************/

#include <pss/parallel.hpp>

#include <pss/lcp_merge.hpp>
#include <pss/mkqs.hpp>
#include <pss/radix_sort.hpp>

#include <algorithm>
#include <atomic>
#include <memory>
#include <mutex>
#include <thread>

namespace pss {

std::size_t default_threads() {
    return std::max(1u, std::thread::hardware_concurrency());
}

namespace {

std::size_t ceil_div(std::size_t a, std::size_t b) { return (a + b - 1) / b; }

/*!
 * Turn per-shard bucket counts hist[t * nb + k] into write offsets, bucket
 * k of shard t after the same bucket of all earlier shards. bucket_begin gets
 * nb + 1 boundaries.
 */
void shard_prefix_sum(std::vector<std::size_t>& hist, std::size_t shards,
                      std::size_t nb, std::vector<std::size_t>& bucket_begin) {
    bucket_begin.resize(nb + 1);
    std::size_t sum = 0;
    for (std::size_t k = 0; k < nb; ++k) {
        bucket_begin[k] = sum;
        for (std::size_t t = 0; t < shards; ++t) {
            const std::size_t c = hist[t * nb + k];
            hist[t * nb + k] = sum;
            sum += c;
        }
    }
    bucket_begin[nb] = sum;
}

} // namespace

/******************************************************************************/
// Parallel S5

namespace {

struct S5Step {
    std::size_t begin, end, depth;
    bool in_shadow;
    SplitterTree tree;
    std::size_t shards;
    std::vector<std::size_t> hist;
    std::vector<key_type> min_key, max_key;
    std::vector<std::size_t> bucket_begin;
    std::atomic<std::size_t> pending{0};

    std::size_t shard_lo(std::size_t t) const {
        return (end - begin) * t / shards;
    }
};

class S5Run
{
public:
    S5Run(WorkPool& pool, const S5Context& ctx, std::size_t p, std::size_t n)
        : pool_(pool), ctx_(ctx), p_(p), threshold_(ceil_div(std::max<std::size_t>(n, 1), p)) { }

    void dispatch(std::size_t b, std::size_t e, std::size_t depth,
                  bool in_shadow) {
        const std::size_t m = e - b;
        if (p_ > 1 && m >= threshold_ && m >= ctx_.config->base_threshold) {
            pool_.enqueue([this, b, e, depth, in_shadow](SortCounters& c) {
                parallel_step(b, e, depth, in_shadow, c);
            });
            return;
        }
        pool_.enqueue([this, b, e, depth, in_shadow](SortCounters& c) {
            s5_range(ctx_, b, e, depth, in_shadow, c, &pool_.hook());
        });
    }

private:
    void parallel_step(std::size_t b, std::size_t e, std::size_t depth,
                       bool in_shadow, SortCounters& c) {
        const S5Config& cfg = *ctx_.config;
        const std::size_t m = e - b;
        auto data = ctx_.data(in_shadow).subspan(b, m);

        auto st = std::make_shared<S5Step>();
        st->begin = b;
        st->end = e;
        st->depth = depth;
        st->in_shadow = in_shadow;
        const std::size_t v = splitter_count_for(m, cfg.max_splitters);
        const auto sample =
            draw_sample(*ctx_.buf, data, depth, v, cfg.oversampling, cfg.seed);
        c.buffer_accesses += sample.size();
        st->tree = select_splitters(sample, v);

        const std::size_t nb = st->tree.num_buckets();
        st->shards = p_;
        st->hist.assign(st->shards * nb, 0);
        if (!ctx_.lcp.empty()) {
            st->min_key.assign(st->shards * nb, 0);
            st->max_key.assign(st->shards * nb, 0);
        }
        st->pending = st->shards;
        for (std::size_t t = 0; t < st->shards; ++t)
            pool_.enqueue([this, st, t](SortCounters& c) { classify_shard(st, t, c); });
    }

    void classify_shard(const std::shared_ptr<S5Step>& st, std::size_t t,
                        SortCounters& c) {
        const std::size_t lo = st->begin + st->shard_lo(t);
        const std::size_t hi = st->begin + st->shard_lo(t + 1);
        const std::size_t nb = st->tree.num_buckets();
        auto data = ctx_.data(st->in_shadow);
        auto keys = ctx_.keys.subspan(lo, hi - lo);
        auto oracle = ctx_.oracle.subspan(lo, hi - lo);

        for (std::size_t i = lo; i < hi; ++i)
            ctx_.keys[i] = extract_key(*ctx_.buf, data[i], st->depth);
        c.buffer_accesses += hi - lo;
        classify(st->tree, keys, oracle, ctx_.config->variant);

        std::size_t* h = st->hist.data() + t * nb;
        for (bucket_type k : oracle) ++h[k];
        if (!ctx_.lcp.empty()) {
            bucket_extremes(st->tree, keys, oracle,
                            std::span(st->min_key).subspan(t * nb, nb),
                            std::span(st->max_key).subspan(t * nb, nb));
        }

        if (st->pending.fetch_sub(1) != 1) return;
        shard_prefix_sum(st->hist, st->shards, nb, st->bucket_begin);
        st->pending = st->shards;
        for (std::size_t s = 0; s < st->shards; ++s)
            pool_.enqueue([this, st, s](SortCounters& c) { distribute_shard(st, s, c); });
    }

    void distribute_shard(const std::shared_ptr<S5Step>& st, std::size_t t,
                          SortCounters& c) {
        const std::size_t lo = st->begin + st->shard_lo(t);
        const std::size_t hi = st->begin + st->shard_lo(t + 1);
        const std::size_t nb = st->tree.num_buckets();
        auto src = ctx_.data(st->in_shadow);
        auto dst = ctx_.data(!st->in_shadow).subspan(st->begin);
        std::size_t* off = st->hist.data() + t * nb;
        for (std::size_t i = lo; i < hi; ++i)
            dst[off[ctx_.oracle[i]]++] = src[i];

        if (st->pending.fetch_sub(1) != 1) return;
        finish(st, c);
    }

    void finish(const std::shared_ptr<S5Step>& st, SortCounters&) {
        const S5Config& cfg = *ctx_.config;
        const std::size_t nb = st->tree.num_buckets();
        const std::size_t m = st->end - st->begin;
        if (cfg.on_step) {
            cfg.on_step(S5StepInfo{ctx_.buf, st->depth, &st->tree,
                                   ctx_.data(!st->in_shadow).subspan(st->begin, m),
                                   st->bucket_begin});
        }
        std::span<const key_type> min_key, max_key;
        if (!ctx_.lcp.empty()) {
            for (std::size_t t = 1; t < st->shards; ++t) {
                for (std::size_t k = 0; k < nb; ++k) {
                    const std::size_t i = t * nb + k;
                    if (st->min_key[i] > st->max_key[i]) continue; // empty
                    st->min_key[k] = std::min(st->min_key[k], st->min_key[i]);
                    st->max_key[k] = std::max(st->max_key[k], st->max_key[i]);
                }
            }
            min_key = std::span(st->min_key).first(nb);
            max_key = std::span(st->max_key).first(nb);
        }
        const bool child_shadow = !st->in_shadow;
        s5_finish_step(ctx_, st->tree, st->bucket_begin, min_key, max_key,
                       st->begin, st->depth, child_shadow,
                       [this, child_shadow](std::size_t b, std::size_t e,
                                            std::size_t d) {
                           dispatch(b, e, d, child_shadow);
                       });
    }

    WorkPool& pool_;
    S5Context ctx_;
    std::size_t p_;
    std::size_t threshold_;
};

} // namespace

void parallel_s5(const CharBuffer& buf, std::span<StringHandle> strings,
                 std::span<std::size_t> lcp, std::span<std::uint8_t> dchar,
                 std::size_t p, const S5Config& config,
                 SortCounters* counters) {
    const std::size_t n = strings.size();
    S5Scratch scratch(p > 1 || n >= config.mkqs_threshold ? n : 0);
    const S5Context ctx{&buf,           &config,      strings, scratch.shadow,
                        scratch.oracle, scratch.keys, lcp,     dchar};
    WorkPool pool(p);
    S5Run run(pool, ctx, p, n);
    if (n > 0) run.dispatch(0, n, 0, false);
    pool.run();
    if (counters) *counters += pool.counters();
}

StringSet parallel_s5(StringSet set, std::size_t p, const S5Config& config,
                      SortCounters* counters) {
    parallel_s5(set.buffer(), set.span(), {}, {}, p, config, counters);
    return set;
}

SortedWithLcp parallel_s5_lcp(StringSet set, std::size_t p, bool with_dchar,
                              const S5Config& config, SortCounters* counters) {
    SortedWithLcp out;
    const std::size_t n = set.size();
    out.lcps.values.assign(n, 0);
    if (with_dchar) out.dchar.assign(n, 0);
    parallel_s5(set.buffer(), set.span(), out.lcps.values, out.dchar, p,
                config, counters);
    if (n > 0) {
        out.lcps.values[0] = lcp_undefined;
        if (with_dchar) out.dchar[0] = set.buffer().at(set.handles()[0], 0);
    }
    out.set = std::move(set);
    return out;
}

/******************************************************************************/
// Parallel caching MKQS

namespace {

using Block = std::vector<CachedEntry>;
using BlockPtr = std::shared_ptr<Block>;

//! a subproblem held as a list of blocks
struct MkqsPart {
    std::vector<BlockPtr> blocks;
    std::size_t size = 0;
    std::size_t depth = 0;
    std::size_t out_begin = 0;
    std::size_t workers = 1;
    //! keys must be reloaded at depth
    bool refresh = false;
};

struct MkqsStep {
    MkqsPart part;
    key_type pivot = 0;
    std::atomic<std::size_t> next{0};
    std::atomic<std::size_t> pending{0};
    std::mutex mutex;
    //! per class <, =, >: full blocks and partially filled blocks
    std::vector<BlockPtr> full[3];
    std::vector<BlockPtr> partial[3];
};

//! entries of a sequential subproblem, kept alive by released jobs
struct MkqsSeqState {
    std::vector<CachedEntry> entries;
    ShareHook hook;
};

class MkqsRun
{
public:
    MkqsRun(WorkPool& pool, const CharBuffer& buf, std::span<StringHandle> out,
            std::size_t block_size)
        : pool_(pool), buf_(buf), out_(out), block_size_(block_size) { }

    void dispatch(MkqsPart part) {
        if (part.size == 0) return;
        if (part.size == 1) {
            for (const auto& b : part.blocks) {
                if (!b->empty()) out_[part.out_begin] = b->front().handle;
            }
            return;
        }
        auto shared = std::make_shared<MkqsPart>(std::move(part));
        if (shared->workers <= 1 || shared->size <= block_size_) {
            pool_.enqueue([this, shared](SortCounters& c) { sequential(*shared, c); });
            return;
        }
        pool_.enqueue([this, shared](SortCounters& c) { start_step(*shared, c); });
    }

    ParallelMkqsStats stats() {
        std::lock_guard<std::mutex> lock(stats_mutex_);
        return stats_;
    }

private:
    void sequential(MkqsPart& part, SortCounters& c) {
        auto state = std::make_shared<MkqsSeqState>();
        state->entries.reserve(part.size);
        for (auto& b : part.blocks) {
            state->entries.insert(state->entries.end(), b->begin(), b->end());
            b.reset();
        }
        if (part.refresh) mkqs_fill_keys(buf_, state->entries, part.depth, c);

        const MkqsCachedContext ctx{&buf_, state->entries,
                                    out_.subspan(part.out_begin, part.size),
                                    {}, {}};
        const ShareHook* hook = &pool_.hook();
        state->hook.idle = hook->idle;
        std::weak_ptr<MkqsSeqState> weak = state;
        state->hook.release = [hook, weak](SharedJob job) {
            hook->release([job = std::move(job), keep = weak.lock()](SortCounters& c) {
                job(c);
            });
        };
        mkqs_cached_range(ctx, 0, part.size, part.depth, c, &state->hook);
    }

    key_type entry_key(const MkqsPart& part, std::size_t index,
                       SortCounters& c) const {
        for (const auto& b : part.blocks) {
            if (index < b->size()) {
                const CachedEntry& e = (*b)[index];
                if (!part.refresh) return e.key;
                ++c.buffer_accesses;
                return extract_key(buf_, e.handle, part.depth);
            }
            index -= b->size();
        }
        return 0;
    }

    void start_step(MkqsPart& part, SortCounters& c) {
        auto st = std::make_shared<MkqsStep>();
        const key_type a = entry_key(part, 0, c);
        const key_type b = entry_key(part, part.size / 2, c);
        const key_type d = entry_key(part, part.size - 1, c);
        st->pivot = std::max(std::min(a, b), std::min(std::max(a, b), d));
        st->part = std::move(part);
        st->pending = st->part.workers;
        for (std::size_t w = 0; w < st->part.workers; ++w)
            pool_.enqueue([this, st](SortCounters& c) { step_worker(st, c); });
    }

    void step_worker(const std::shared_ptr<MkqsStep>& st, SortCounters& c) {
        const MkqsPart& part = st->part;
        BlockPtr local[3];
        std::uint64_t reads = 0;

        std::size_t i;
        while ((i = st->next.fetch_add(1)) < part.blocks.size())
        {
            const BlockPtr in = std::move(st->part.blocks[i]);
            for (CachedEntry e : *in) {
                if (part.refresh) {
                    e.key = extract_key(buf_, e.handle, part.depth);
                    ++reads;
                }
                const int cls = e.key < st->pivot ? 0 : e.key == st->pivot ? 1 : 2;
                if (!local[cls]) {
                    local[cls] = std::make_shared<Block>();
                    local[cls]->reserve(block_size_);
                }
                local[cls]->push_back(e);
                if (local[cls]->size() == block_size_) {
                    std::lock_guard<std::mutex> lock(st->mutex);
                    st->full[cls].push_back(std::move(local[cls]));
                    local[cls] = nullptr;
                }
            }
        }
        c.buffer_accesses += reads;
        {
            std::lock_guard<std::mutex> lock(st->mutex);
            for (int cls = 0; cls < 3; ++cls) {
                if (local[cls] && !local[cls]->empty())
                    st->partial[cls].push_back(std::move(local[cls]));
            }
        }
        if (st->pending.fetch_sub(1) == 1) finish_step(st);
    }

    //! second phase: compact partial blocks and recurse
    void finish_step(const std::shared_ptr<MkqsStep>& st) {
        const MkqsPart& part = st->part;
        std::size_t num_partial = 0;
        for (const auto& p : st->partial) num_partial += p.size();
        {
            std::lock_guard<std::mutex> lock(stats_mutex_);
            ++stats_.parallel_steps;
            stats_.max_partial_blocks = std::max(stats_.max_partial_blocks, num_partial);
            stats_.max_step_workers = std::max(stats_.max_step_workers, part.workers);
            stats_.step_depths.push_back(part.depth);
        }

        MkqsPart child[3];
        for (int cls = 0; cls < 3; ++cls) {
            std::vector<BlockPtr>& blocks = st->full[cls];
            BlockPtr cur;
            for (auto& pb : st->partial[cls]) {
                for (const CachedEntry& e : *pb) {
                    if (!cur) {
                        cur = std::make_shared<Block>();
                        cur->reserve(block_size_);
                    }
                    cur->push_back(e);
                    if (cur->size() == block_size_) blocks.push_back(std::move(cur));
                }
                pb.reset();
            }
            if (cur && !cur->empty()) blocks.push_back(std::move(cur));

            child[cls].blocks = std::move(blocks);
            for (const auto& b : child[cls].blocks) child[cls].size += b->size();
            child[cls].depth = part.depth;
        }

        child[0].out_begin = part.out_begin;
        child[1].out_begin = part.out_begin + child[0].size;
        child[2].out_begin = child[1].out_begin + child[1].size;
        for (int cls = 0; cls < 3; ++cls) {
            child[cls].workers = std::max<std::size_t>(
                1, (part.workers * child[cls].size + part.size / 2) / part.size);
        }

        if (key_has_terminator(st->pivot)) {
            // completely equal strings
            std::size_t pos = child[1].out_begin;
            for (const auto& b : child[1].blocks)
                for (const CachedEntry& e : *b) out_[pos++] = e.handle;
            child[1] = MkqsPart{};
        }
        else {
            child[1].depth += key_width;
            child[1].refresh = true;
        }
        for (auto& ch : child) dispatch(std::move(ch));
    }

    WorkPool& pool_;
    const CharBuffer& buf_;
    std::span<StringHandle> out_;
    std::size_t block_size_;
    std::mutex stats_mutex_;
    ParallelMkqsStats stats_;
};

} // namespace

void parallel_mkqs(const CharBuffer& buf, std::span<StringHandle> strings,
                   std::size_t p, const ParallelMkqsOptions& options,
                   SortCounters* counters, ParallelMkqsStats* stats) {
    const std::size_t n = strings.size();
    const std::size_t block_size = std::max<std::size_t>(1, options.block_size);

    MkqsPart root;
    root.size = n;
    root.workers = p;
    root.refresh = true;
    for (std::size_t i = 0; i < n; i += block_size) {
        auto b = std::make_shared<Block>();
        const std::size_t e = std::min(n, i + block_size);
        b->reserve(e - i);
        for (std::size_t j = i; j < e; ++j) b->push_back(CachedEntry{strings[j], 0});
        root.blocks.push_back(std::move(b));
    }

    WorkPool pool(p);
    MkqsRun run(pool, buf, strings, block_size);
    run.dispatch(std::move(root));
    pool.run();
    if (counters) *counters += pool.counters();
    if (stats) *stats = run.stats();
}

StringSet parallel_mkqs(StringSet set, std::size_t p,
                        const ParallelMkqsOptions& options,
                        SortCounters* counters, ParallelMkqsStats* stats) {
    parallel_mkqs(set.buffer(), set.span(), p, options, counters, stats);
    return set;
}

/******************************************************************************/
// Parallel radix sort

namespace {

struct RadixStepState {
    std::size_t begin, end, depth;
    unsigned bits;
    std::size_t shards;
    std::vector<std::size_t> hist;
    std::vector<std::size_t> bucket_begin;
    std::atomic<std::size_t> pending{0};

    std::size_t num_buckets() const { return std::size_t(1) << bits; }
    std::size_t shard_lo(std::size_t t) const {
        return begin + (end - begin) * t / shards;
    }
};

class RadixRun
{
public:
    RadixRun(WorkPool& pool, const CharBuffer& buf,
             std::span<StringHandle> strings, std::size_t p)
        : pool_(pool), buf_(buf), strings_(strings),
          scratch_(strings.size()), digits_(strings.size()), p_(p),
          threshold_(ceil_div(std::max<std::size_t>(strings.size(), 1), p)) { }

    void dispatch(std::size_t b, std::size_t e, std::size_t depth) {
        const std::size_t m = e - b;
        if (m < 2) return;
        if (m >= threshold_ && m >= radix_base_threshold) {
            pool_.enqueue([this, b, e, depth](SortCounters&) { start_step(b, e, depth); });
            return;
        }
        pool_.enqueue([this, b, e, depth](SortCounters& c) {
            radix8_range(Radix8Context{&buf_, strings_, nullptr}, b, e, depth, c,
                         &pool_.hook());
        });
    }

private:
    void start_step(std::size_t b, std::size_t e, std::size_t depth) {
        auto st = std::make_shared<RadixStepState>();
        st->begin = b;
        st->end = e;
        st->depth = depth;
        st->bits = e - b >= radix16_threshold ? 16 : 8;
        st->shards = p_;
        st->hist.assign(st->shards * st->num_buckets(), 0);
        st->pending = st->shards;
        for (std::size_t t = 0; t < st->shards; ++t)
            pool_.enqueue([this, st, t](SortCounters& c) { count_shard(st, t, c); });
    }

    void count_shard(const std::shared_ptr<RadixStepState>& st, std::size_t t,
                     SortCounters& c) {
        const std::size_t nb = st->num_buckets();
        std::size_t* h = st->hist.data() + t * nb;
        std::uint64_t reads = 0;
        for (std::size_t i = st->shard_lo(t); i < st->shard_lo(t + 1); ++i) {
            std::uint16_t d;
            if (st->bits == 16) {
                d = radix16_digit(buf_, strings_[i], st->depth);
                reads += (d >> 8) ? 2 : 1;
            }
            else {
                d = buf_.at(strings_[i], st->depth);
                ++reads;
            }
            digits_[i] = d;
            ++h[d];
        }
        c.buffer_accesses += reads;

        if (st->pending.fetch_sub(1) != 1) return;
        shard_prefix_sum(st->hist, st->shards, nb, st->bucket_begin);
        st->pending = st->shards;
        for (std::size_t s = 0; s < st->shards; ++s)
            pool_.enqueue([this, st, s](SortCounters&) { distribute_shard(st, s); });
    }

    void distribute_shard(const std::shared_ptr<RadixStepState>& st,
                          std::size_t t) {
        std::size_t* off = st->hist.data() + t * st->num_buckets();
        for (std::size_t i = st->shard_lo(t); i < st->shard_lo(t + 1); ++i)
            scratch_[st->begin + off[digits_[i]]++] = strings_[i];

        if (st->pending.fetch_sub(1) != 1) return;
        st->pending = st->shards;
        for (std::size_t s = 0; s < st->shards; ++s)
            pool_.enqueue([this, st, s](SortCounters&) { copy_back(st, s); });
    }

    void copy_back(const std::shared_ptr<RadixStepState>& st, std::size_t t) {
        std::copy(scratch_.begin() + st->shard_lo(t),
                  scratch_.begin() + st->shard_lo(t + 1),
                  strings_.begin() + st->shard_lo(t));

        if (st->pending.fetch_sub(1) != 1) return;
        const std::size_t nb = st->num_buckets();
        const std::size_t step = st->bits / 8;
        for (std::size_t k = 0; k < nb; ++k) {
            // a zero character ends the strings: the bucket is all equal
            const bool final = (k & 0xFF) == 0;
            if (final) continue;
            dispatch(st->begin + st->bucket_begin[k],
                     st->begin + st->bucket_begin[k + 1], st->depth + step);
        }
    }

    WorkPool& pool_;
    const CharBuffer& buf_;
    std::span<StringHandle> strings_;
    std::vector<StringHandle> scratch_;
    std::vector<std::uint16_t> digits_;
    std::size_t p_;
    std::size_t threshold_;
};

} // namespace

void parallel_radix(const CharBuffer& buf, std::span<StringHandle> strings,
                    std::size_t p, SortCounters* counters) {
    if (p <= 1) {
        std::vector<StringHandle> scratch(strings.size());
        radix16_adaptive(buf, strings, scratch, 0, counters);
        return;
    }
    WorkPool pool(p);
    RadixRun run(pool, buf, strings, p);
    run.dispatch(0, strings.size(), 0);
    pool.run();
    if (counters) *counters += pool.counters();
}

StringSet parallel_radix(StringSet set, std::size_t p, SortCounters* counters) {
    parallel_radix(set.buffer(), set.span(), p, counters);
    return set;
}

/******************************************************************************/
// Partitioned sort and merge

namespace {

class MergeRun
{
public:
    MergeRun(WorkPool& pool, const CharBuffer& buf,
             std::span<const LcpStream> streams, const MergeOutput& out,
             bool cached, std::size_t p, std::size_t interval)
        : pool_(pool), buf_(buf), streams_(streams), out_(out),
          cached_(cached), p_(p), interval_(std::max<std::size_t>(1, interval)) { }

    //! split_depth: characters shared by the job and its predecessor
    void submit(MergeJob job, std::size_t split_depth) {
        pool_.enqueue([this, job = std::move(job), split_depth](SortCounters& c) {
            execute(job, split_depth, c);
        });
    }

    //! repair LCPs at job starts left unknown by the splitter
    void fix_boundaries(SortCounters& c) {
        for (const auto& [pos, from] : fixes_)
            fix_boundary_lcp(buf_, out_, pos, from, &c);
    }

    std::size_t jobs() const { return jobs_; }
    std::size_t copy_jobs() const { return copy_jobs_; }
    std::size_t resplits() const { return resplits_; }

private:
    void execute(const MergeJob& job, std::size_t split_depth, SortCounters& c) {
        ++jobs_;
        if (!job.boundary_known && job.out_begin > 0) {
            std::lock_guard<std::mutex> lock(mutex_);
            fixes_.emplace_back(job.out_begin, split_depth);
        }

        std::size_t nonempty = 0;
        for (const auto& r : job.ranges) nonempty += r.size() > 0;
        if (nonempty <= 1) {
            ++copy_jobs_;
            run_merge_job(buf_, streams_, job, out_, cached_, &c);
            return;
        }

        LoserTree tree(buf_, streams_, job.depth, cached_, &c, job.ranges);
        std::size_t pos = job.out_begin;
        pos += tree.merge(out_, pos, interval_);
        if (job.boundary_known) {
            out_.lcps[job.out_begin] = job.boundary_lcp;
            if (!out_.dchar.empty()) out_.dchar[job.out_begin] = job.boundary_dchar;
        }
        while (!tree.done())
        {
            if (tree.remaining() > interval_ && pool_.idle_workers() > 0) {
                // hand the rest to idle workers as new jobs
                const auto ranges = tree.remaining_ranges();
                auto sub = split_merge_jobs(buf_, streams_, ranges, job.depth,
                                            pos, SplitOptions{std::max<std::size_t>(2, p_), key_width},
                                            &c);
                ++resplits_;
                ++c.share_events;
                for (auto& s : sub) submit(std::move(s), job.depth);
                return;
            }
            pos += tree.merge(out_, pos, interval_);
        }
    }

    WorkPool& pool_;
    const CharBuffer& buf_;
    std::span<const LcpStream> streams_;
    MergeOutput out_;
    bool cached_;
    std::size_t p_;
    std::size_t interval_;
    std::mutex mutex_;
    std::vector<std::pair<std::size_t, std::size_t>> fixes_;
    std::atomic<std::size_t> jobs_{0}, copy_jobs_{0}, resplits_{0};
};

//! contiguous handle ranges of roughly total / parts bytes each
std::vector<std::vector<StringHandle>> split_by_bytes(const StringSet& set,
                                                      std::size_t parts) {
    const CharBuffer& buf = set.buffer();
    const auto& hs = set.handles();
    std::vector<std::size_t> bytes(hs.size());
    std::size_t total = 0;
    for (std::size_t i = 0; i < hs.size(); ++i) {
        bytes[i] = buf.length(hs[i]) + 1;
        total += bytes[i];
    }

    std::vector<std::vector<StringHandle>> out;
    std::vector<StringHandle> cur;
    std::size_t acc = 0;
    for (std::size_t i = 0; i < hs.size(); ++i) {
        cur.push_back(hs[i]);
        acc += bytes[i];
        // cut when the running byte count reaches the next part boundary
        if (out.size() + 1 < parts &&
            acc * parts >= total * (out.size() + 1)) {
            out.push_back(std::move(cur));
            cur.clear();
        }
    }
    if (!cur.empty()) out.push_back(std::move(cur));
    return out;
}

SortCounters operator-(SortCounters a, const SortCounters& b) {
    a.char_comparisons -= b.char_comparisons;
    a.buffer_accesses -= b.buffer_accesses;
    a.jobs -= b.jobs;
    a.share_events -= b.share_events;
    return a;
}

} // namespace

PartitionedResult partitioned_merge_sort(StringSet set, std::size_t p,
                                         const PartitionedOptions& options) {
    PartitionedResult result;
    const CharBuffer& buf = set.buffer();
    const bool cached = options.use_cache;
    const std::size_t n = set.size();

    auto handle_parts = split_by_bytes(set, std::max<std::size_t>(1, options.parts));
    const std::size_t K = handle_parts.size();
    result.nonempty_parts = K;

    std::vector<SortedWithLcp> parts(K);
    std::vector<std::unique_ptr<S5Scratch>> scratch;
    std::vector<std::unique_ptr<S5Run>> runs;
    WorkPool pool(p);

    // sort phase: every part on about p / K workers of the shared pool
    const std::size_t part_threads = std::max<std::size_t>(1, p / std::max<std::size_t>(1, K));
    for (std::size_t k = 0; k < K; ++k) {
        SortedWithLcp& part = parts[k];
        const std::size_t m = handle_parts[k].size();
        part.set = set.with_handles(std::move(handle_parts[k]));
        part.lcps.values.assign(m, 0);
        if (cached) part.dchar.assign(m, 0);
        scratch.push_back(std::make_unique<S5Scratch>(m));
        const S5Context ctx{&buf,
                            &options.config,
                            part.set.span(),
                            scratch.back()->shadow,
                            scratch.back()->oracle,
                            scratch.back()->keys,
                            part.lcps.values,
                            part.dchar};
        runs.push_back(std::make_unique<S5Run>(pool, ctx, part_threads, m));
        runs.back()->dispatch(0, m, 0, false);
    }
    pool.run();
    result.sort_counters = pool.counters();
    scratch.clear();

    std::size_t input_l = 0;
    std::vector<LcpStream> streams;
    for (auto& part : parts) {
        part.lcps.values[0] = lcp_undefined;
        if (cached) part.dchar[0] = buf.at(part.set.handles()[0], 0);
        input_l += part.lcps.sum();
        streams.push_back(make_stream(part));
    }

    // merge phase on the full pool
    SortedWithLcp& out = result.sorted;
    out.set = set.with_handles(std::vector<StringHandle>(n));
    out.lcps.values.assign(n, 0);
    if (cached) out.dchar.assign(n, 0);
    const MergeOutput dst{out.set.span(), out.lcps.values, out.dchar};

    SortCounters merge_local;
    const SplitOptions split{std::max<std::size_t>(1, options.jobs_per_thread * p),
                             key_width};
    auto jobs = split_merge_jobs(buf, streams, 0, split, &merge_local);
    MergeRun merge(pool, buf, streams, dst, cached, p, options.resplit_interval);
    for (auto& j : jobs) merge.submit(std::move(j), 0);
    pool.run();
    merge.fix_boundaries(merge_local);
    result.merge_counters = (pool.counters() - result.sort_counters);
    result.merge_counters += merge_local;

    result.merge_jobs = merge.jobs();
    result.copy_jobs = merge.copy_jobs();
    result.resplits = merge.resplits();

    if (n > 0) {
        out.lcps.values[0] = lcp_undefined;
        if (cached) out.dchar[0] = buf.at(out.set.handles()[0], 0);
    }
    result.delta_l = out.lcps.sum() - input_l;
    return result;
}

} // namespace pss

/******************************************************************************/
