/*******************************************************************************
 * tests/test_mkqs.cpp
 *
 *******************************************************************************
 * Published under the Boost Software License, Version 1.0
 ******************************************************************************/

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "test_util.hpp"

#include <pss/mkqs.hpp>

using namespace pss;
using namespace pss_test;

TEST_CASE("mkqs small and degenerate") {
    CHECK(mkqs(make_string_set({"b", "a", "c"})).strings() ==
          std::vector<std::string>{"a", "b", "c"});
    CHECK(mkqs(StringSet()).empty());
    auto eq = equal_set(500, "aaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaa");
    CHECK(verify(eq, mkqs(eq)).ok());
    auto em = empty_strings_set(300);
    CHECK(verify(em, mkqs(em)).ok());
}

TEST_CASE("mkqs matches reference sort") {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        auto in = seed % 2 ? small_alphabet_set(1000, seed) : random_set(1000, seed);
        auto out = mkqs(in);
        CHECK(verify(in, out).ok());
        CHECK(out.strings() == sorted_contents(in));
    }
}

TEST_CASE("mkqs_cached sorts and produces the oracle LCP array") {
    std::vector<StringSet> corpora = {
        StringSet(),           make_string_set({"x"}),
        random_set(2, 1),      random_set(1000, 2),
        small_alphabet_set(3000, 3), equal_set(700),
        empty_strings_set(200),  cluster_set(2000, 4),
        suffix_set(word_text(3000, 5), 3000), url_set(2000, 6)};
    for (auto& in : corpora) {
        auto r = mkqs_cached(in, 0, true);
        REQUIRE(verify(in, r.set).ok());
        REQUIRE(r.set.strings() == sorted_contents(in));
        REQUIRE(r.lcps == lcp_array_oracle(r.set));
        for (std::size_t i = 1; i < r.set.size(); ++i)
            REQUIRE(r.dchar[i] == r.set.buffer().at(r.set.handles()[i], r.lcps[i]));
        CHECK(mkqs(in).strings() == r.set.strings());
    }
}

TEST_CASE("mkqs_cached refills once per string for a shared word") {
    std::vector<std::string> v;
    for (int i = 0; i < 200; ++i) v.push_back("aaaaaaaa" + std::to_string(100 + i));
    auto in = make_string_set(v);
    SortCounters c;
    auto r = mkqs_cached(in, 0, false, &c);
    CHECK(r.set.strings() == sorted_contents(in));
    // initial load plus one refill at depth 8
    CHECK(c.buffer_accesses == 2 * v.size());
}

TEST_CASE("mkqs_cached buffer accesses within D/w + n") {
    std::vector<StringSet> corpora = {
        random_set(20000, 7), small_alphabet_set(5000, 8, 40),
        equal_set(3000, "the quick brown fox jumps over"), url_set(20000, 9),
        cluster_set(5000, 10), suffix_set(word_text(5000, 11), 5000)};
    for (auto& in : corpora) {
        SortCounters c;
        mkqs_cached(in, 0, false, &c);
        const DistStats st = dist_stats(in);
        CHECK(c.buffer_accesses <= st.D / key_width + in.size());
    }
}

TEST_CASE("mkqs_cached distinct leading characters") {
    std::vector<std::string> v;
    for (int c = 33; c < 127; ++c) v.push_back(std::string(1, char(c)) + "tail");
    auto in = make_string_set(v);
    SortCounters c;
    mkqs_cached(in, 0, false, &c);
    CHECK(c.buffer_accesses <= dist_stats(in).D / key_width + in.size());
}

TEST_CASE("mkqs_cached with common prefix depth") {
    std::vector<std::string> v;
    std::mt19937_64 rng(12);
    for (int i = 0; i < 500; ++i) {
        std::string s = "xyz";
        for (int k = 0; k < int(rng() % 20); ++k) s += "ab"[rng() % 2];
        v.push_back(s);
    }
    auto in = make_string_set(v);
    auto r = mkqs_cached(in, 3);
    CHECK(r.set.strings() == sorted_contents(in));
    CHECK(r.lcps == lcp_array_oracle(r.set));
}

TEST_CASE("mkqs_cached releases ranges through the hook") {
    auto in = small_alphabet_set(5000, 13);
    const std::size_t n = in.size();
    std::vector<CachedEntry> entries(n);
    for (std::size_t i = 0; i < n; ++i) entries[i].handle = in.handles()[i];
    std::vector<StringHandle> out(n);
    std::vector<std::size_t> lcp(n);
    SortCounters c;
    mkqs_fill_keys(in.buffer(), entries, 0, c);
    MkqsCachedContext ctx{&in.buffer(), entries, out, lcp, {}};

    std::vector<SharedJob> released;
    int polls = 0;
    ShareHook hook;
    hook.idle = [&] { return ++polls % 3 == 0; };
    hook.release = [&](SharedJob j) { released.push_back(std::move(j)); };
    mkqs_cached_range(ctx, 0, n, 0, c, &hook);
    CHECK(c.share_events > 0);
    // released jobs run later and may release more
    while (!released.empty()) {
        SharedJob j = std::move(released.back());
        released.pop_back();
        j(c);
    }
    auto sorted = in.with_handles(out);
    CHECK(verify(in, sorted).ok());
    lcp[0] = lcp_undefined;
    CHECK(lcp == lcp_array_oracle(sorted).values);
}

/******************************************************************************/
