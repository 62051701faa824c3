/*******************************************************************************
 * tests/test_parallel.cpp
 *
 *******************************************************************************
 * Published under the Boost Software License, Version 1.0
 ******************************************************************************/

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "test_util.hpp"

#include <pss/mkqs.hpp>
#include <pss/parallel.hpp>
#include <pss/radix_sort.hpp>
#include <pss/sample_sort.hpp>
#include <pss/work_pool.hpp>

#include <atomic>
#include <stdexcept>

using namespace pss;
using namespace pss_test;

namespace {

std::vector<StringSet> corpora() {
    return {StringSet(),
            make_string_set({"x"}),
            random_set(2, 1),
            random_set(3000, 2),
            small_alphabet_set(5000, 3),
            equal_set(2000),
            empty_strings_set(500),
            cluster_set(4000, 4),
            suffix_set(word_text(6000, 5), 6000),
            url_set(3000, 6)};
}

//! small thresholds so that short inputs exercise parallel and sample steps
S5Config small_config() {
    S5Config cfg;
    cfg.mkqs_threshold = 300;
    cfg.max_splitters = 63;
    return cfg;
}

const std::size_t thread_counts[] = {1, 2, 3, 4, 8};

} // namespace

TEST_CASE("pool executes every job exactly once") {
    std::vector<std::atomic<int>> hits(100);
    std::vector<SharedJob> roots;
    for (std::size_t i = 0; i < 100; ++i)
        roots.push_back([&hits, i](SortCounters&) { ++hits[i]; });
    const SortCounters c = pool_run(4, std::move(roots));
    CHECK(c.jobs == 100);
    for (auto& h : hits) CHECK(h == 1);
}

TEST_CASE("pool runs transitively enqueued jobs and terminates") {
    WorkPool pool(3);
    std::atomic<int> count{0};
    std::function<void(int)> spawn = [&](int level) {
        pool.enqueue([&, level](SortCounters&) {
            ++count;
            if (level < 6) {
                spawn(level + 1);
                spawn(level + 1);
            }
        });
    };
    spawn(0);
    pool.run();
    CHECK(count == 127);
    CHECK(pool.counters().jobs == 127);
    CHECK(pool.enqueued() == 127);
}

TEST_CASE("single worker runs jobs in queue order") {
    WorkPool pool(1);
    std::vector<int> order;
    for (int i = 0; i < 5; ++i)
        pool.enqueue([&order, &pool, i](SortCounters&) {
            order.push_back(i);
            if (i == 0) pool.enqueue([&order](SortCounters&) { order.push_back(9); });
        });
    pool.run();
    CHECK(order == std::vector<int>{0, 1, 2, 3, 4, 9});
}

TEST_CASE("pool rethrows the first job failure") {
    WorkPool pool(2);
    pool.enqueue([](SortCounters&) { throw std::runtime_error("boom"); });
    CHECK_THROWS_AS(pool.run(), std::runtime_error);
}

TEST_CASE("long sequential job shares work with idle workers") {
    auto in = random_set(200000, 7);
    S5Config cfg;
    cfg.mkqs_threshold = 1000;
    S5Scratch scratch(in.size());
    const S5Context ctx{&in.buffer(),   &cfg,         in.span(), scratch.shadow,
                        scratch.oracle, scratch.keys, {},        {}};
    WorkPool pool(2);
    pool.enqueue([&](SortCounters& c) {
        s5_range(ctx, 0, in.size(), 0, false, c, &pool.hook());
    });
    pool.run();
    CHECK(pool.counters().share_events >= 1);
    CHECK(verify_order(in.buffer(), in.handles()).ok());
}

TEST_CASE("parallel_s5 sorts with exact LCP arrays for all thread counts") {
    for (auto& in : corpora()) {
        const auto expect = sorted_contents(in);
        for (std::size_t p : thread_counts) {
            for (const S5Config& cfg : {S5Config{}, small_config()}) {
                auto r = parallel_s5_lcp(in, p, true, cfg);
                REQUIRE(verify(in, r.set).ok());
                REQUIRE(r.set.strings() == expect);
                REQUIRE(r.lcps == lcp_array_oracle(r.set));
                for (std::size_t i = 1; i < r.set.size(); ++i)
                    REQUIRE(r.dchar[i] ==
                            in.buffer().at(r.set.handles()[i], r.lcps[i]));
            }
        }
    }
}

TEST_CASE("parallel_s5 with one thread matches the sequential sorter") {
    auto in = url_set(5000, 8);
    const S5Config cfg = small_config();
    SortCounters seq, par;
    auto a = s5_sort_lcp(in, 0, false, cfg, &seq);
    auto b = parallel_s5_lcp(in, 1, false, cfg, &par);
    CHECK(a.set.handles() == b.set.handles());
    CHECK(a.lcps == b.lcps);
    CHECK(seq.char_comparisons == par.char_comparisons);
    CHECK(seq.buffer_accesses == par.buffer_accesses);
}

TEST_CASE("parallel_s5 bucket counts of a parallel step cover the range") {
    auto in = random_set(8000, 9);
    S5Config cfg = small_config();
    std::mutex m;
    std::size_t steps = 0, top = 0;
    cfg.on_step = [&](const S5StepInfo& info) {
        std::lock_guard<std::mutex> lock(m);
        ++steps;
        if (info.strings.size() == 8000) top = info.bucket_begin.back();
    };
    auto out = parallel_s5(in, 4, cfg);
    CHECK(verify(in, out).ok());
    CHECK(steps >= 1);
    CHECK(top == 8000);
}

TEST_CASE("parallel_mkqs sorts for all thread counts") {
    for (auto& in : corpora()) {
        const auto expect = sorted_contents(in);
        for (std::size_t p : thread_counts) {
            ParallelMkqsStats st;
            auto r = parallel_mkqs(in, p, ParallelMkqsOptions{128}, nullptr, &st);
            REQUIRE(verify(in, r).ok());
            REQUIRE(r.strings() == expect);
            CHECK(st.max_partial_blocks <= 3 * p);
        }
    }
}

TEST_CASE("parallel_mkqs on one block equals sequential caching MKQS") {
    auto in = random_set(1000, 10);
    SortCounters a, b;
    ParallelMkqsStats st;
    auto seq = mkqs_cached(in, 0, false, &a);
    auto par = parallel_mkqs(in, 4, ParallelMkqsOptions{}, &b, &st);
    CHECK(st.parallel_steps == 0);
    CHECK(seq.set.handles() == par.handles());
    CHECK(a.char_comparisons == b.char_comparisons);
    CHECK(a.buffer_accesses == b.buffer_accesses);
}

TEST_CASE("parallel_mkqs on equal strings recurses once per word") {
    auto in = equal_set(4000, std::string(40, 'q'));
    ParallelMkqsStats st;
    auto r = parallel_mkqs(in, 4, ParallelMkqsOptions{256}, nullptr, &st);
    CHECK(verify(in, r).ok());
    std::sort(st.step_depths.begin(), st.step_depths.end());
    CHECK(st.step_depths == std::vector<std::size_t>{0, 8, 16, 24, 32, 40});
    CHECK(st.max_step_workers == 4);
}

TEST_CASE("parallel_radix sorts for all thread counts") {
    auto big = random_set(150000, 11);
    auto all = corpora();
    all.push_back(big);
    for (auto& in : all) {
        const auto expect = sorted_contents(in);
        for (std::size_t p : thread_counts) {
            auto r = parallel_radix(in, p);
            REQUIRE(verify(in, r).ok());
            REQUIRE(r.strings() == expect);
        }
    }
    CHECK(parallel_radix(big, 1).handles() == radix16_adaptive(big).handles());
}

TEST_CASE("partitioned merge sort produces the oracle LCP array") {
    for (auto& in : corpora()) {
        const auto expect = sorted_contents(in);
        for (std::size_t k : {1, 2, 4, 7}) {
            for (bool cache : {false, true}) {
                PartitionedOptions opt;
                opt.parts = k;
                opt.use_cache = cache;
                opt.config = small_config();
                opt.resplit_interval = 64;
                auto r = partitioned_merge_sort(in, 4, opt);
                REQUIRE(verify(in, r.sorted.set).ok());
                REQUIRE(r.sorted.set.strings() == expect);
                REQUIRE(r.sorted.lcps == lcp_array_oracle(r.sorted.set));
                if (cache) {
                    for (std::size_t i = 1; i < in.size(); ++i)
                        REQUIRE(r.sorted.dchar[i] ==
                                in.buffer().at(r.sorted.set.handles()[i],
                                               r.sorted.lcps[i]));
                }
                CHECK(r.nonempty_parts <= k);
            }
        }
    }
}

TEST_CASE("partitioned merge sort with one part equals parallel_s5") {
    auto in = random_set(5000, 12);
    PartitionedOptions opt;
    opt.parts = 1;
    auto r = partitioned_merge_sort(in, 2, opt);
    CHECK(r.sorted.set.strings() == parallel_s5(in, 2).strings());
    CHECK(r.copy_jobs == r.merge_jobs);
}

TEST_CASE("partitioned merge: caching saves buffer reads") {
    for (std::uint64_t seed = 0; seed < 3; ++seed) {
        auto in = seed == 2 ? url_set(20000, seed) : random_set(20000, seed);
        PartitionedOptions opt;
        opt.parts = 4;
        auto plain = partitioned_merge_sort(in, 2, opt);
        opt.use_cache = true;
        auto cached = partitioned_merge_sort(in, 2, opt);
        CHECK(cached.merge_counters.buffer_accesses <
              plain.merge_counters.buffer_accesses);
        CHECK(cached.delta_l == plain.delta_l);
        CHECK(cached.merge_counters.buffer_accesses <=
              cached.delta_l + in.size() / 20);
    }
}

TEST_CASE("parts with disjoint leading characters merge by concatenation") {
    std::vector<std::string> v;
    for (char c : {'d', 'c', 'b', 'a'})
        for (int i = 0; i < 500; ++i) v.push_back(std::string(1, c) + std::to_string(i));
    auto in = make_string_set(v);
    PartitionedOptions opt;
    opt.parts = 4;
    opt.use_cache = true;
    auto r = partitioned_merge_sort(in, 2, opt);
    REQUIRE(r.sorted.set.strings() == sorted_contents(in));
    CHECK(r.nonempty_parts == 4);
    CHECK(r.merge_jobs >= 4);
    CHECK(r.copy_jobs == r.merge_jobs);
}
