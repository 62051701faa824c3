/*******************************************************************************
 * tests/test_strset.cpp
 *
 *******************************************************************************
 * Published under the Boost Software License, Version 1.0
 ******************************************************************************/

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "test_util.hpp"

#include <pss/string_set.hpp>

using namespace pss;
using namespace pss_test;

TEST_CASE("load_delimited zero bytes") {
    const std::string in("a\0b\0", 4);
    StringSet s = load_delimited(in, '\0');
    REQUIRE(s.size() == 2);
    CHECK(s.handles()[0].offset == 0);
    CHECK(s.handles()[1].offset == 2);
    CHECK(s[0] == "a");
    CHECK(s[1] == "b");
}

TEST_CASE("load_delimited empty input") {
    CHECK(load_delimited("", '\n').size() == 0);
}

TEST_CASE("load_delimited newline and missing trailing delimiter") {
    StringSet s = load_delimited("ab\ncd\n", '\n');
    CHECK(s.strings() == std::vector<std::string>{"ab", "cd"});
    CHECK(s.buffer().at(s.handles()[0], 2) == 0);

    StringSet t = load_delimited("ab\n\ncd", '\n');
    CHECK(t.strings() == std::vector<std::string>{"ab", "", "cd"});
}

TEST_CASE("load_delimited matches splitting on the delimiter") {
    std::mt19937_64 rng(5);
    for (int iter = 0; iter < 50; ++iter) {
        std::string in;
        std::vector<std::string> expect;
        std::string cur;
        const int len = static_cast<int>(rng() % 200);
        for (int i = 0; i < len; ++i) {
            const char c = "ab\n"[rng() % 3];
            in += c;
            if (c == '\n') {
                expect.push_back(cur);
                cur.clear();
            }
            else {
                cur += c;
            }
        }
        if (!cur.empty()) expect.push_back(cur);
        CHECK(load_delimited(in, '\n').strings() == expect);
    }
}

TEST_CASE("load_delimited rejects zero bytes with another delimiter") {
    const std::string in("a\0b\n", 4);
    CHECK_THROWS_AS(load_delimited(in, '\n'), std::invalid_argument);
}

TEST_CASE("extract_key byte layout") {
    StringSet s = make_string_set({"ab", "", "abcdefghijkl"});
    CHECK(extract_key(s.buffer(), s.handles()[0], 0) == 0x6162000000000000ull);
    CHECK(extract_key(s.buffer(), s.handles()[1], 0) == 0);
    CHECK(extract_key(s.buffer(), s.handles()[0], 2) == 0);
    CHECK(extract_key(s.buffer(), s.handles()[2], 4) == 0x65666768696A6B6Cull);
    CHECK(extract_key(s.buffer(), s.handles()[2], 6) == 0x6768696A6B6C0000ull);
}

TEST_CASE("extract_key order matches character-wise comparison") {
    StringSet s = small_alphabet_set(300, 17, 12);
    std::mt19937_64 rng(3);
    const auto& buf = s.buffer();
    auto padded = [&](StringHandle h, std::size_t d) {
        std::string out(key_width, '\0');
        const std::string_view v = buf.view(h);
        for (std::size_t i = 0; i < key_width && d + i < v.size(); ++i)
            out[i] = v[d + i];
        return out;
    };
    for (int iter = 0; iter < 20000; ++iter) {
        const StringHandle a = s.handles()[rng() % s.size()];
        const StringHandle b = s.handles()[rng() % s.size()];
        const std::size_t maxd = std::min(buf.length(a), buf.length(b));
        const std::size_t d = rng() % (maxd + 1);
        const key_type ka = extract_key(buf, a, d), kb = extract_key(buf, b, d);
        const std::string pa = padded(a, d), pb = padded(b, d);
        REQUIRE((ka <= kb) == (pa <= pb));
        REQUIRE((ka == kb) == (pa == pb));
        // shared prefix of keys equals the character-wise one
        std::size_t k = 0;
        while (k < key_width && pa[k] == pb[k]) ++k;
        REQUIRE(key_lcp(ka, kb) == k);
    }
}

TEST_CASE("key helpers") {
    CHECK(key_depth(0x6162000000000000ull) == 2);
    CHECK(key_depth(0) == 0);
    CHECK(key_depth(0x0102030405060708ull) == 8);
    CHECK(key_has_terminator(0x6162000000000000ull));
    CHECK_FALSE(key_has_terminator(0x0102030405060708ull));
    CHECK(key_char(0x6162000000000000ull, 1) == 0x62);
}

TEST_CASE("lcp examples and symmetry") {
    StringSet s = make_string_set({"abc", "abd", "", "xyz", "aaa", "aaa"});
    const auto& b = s.buffer();
    const auto& h = s.handles();
    CHECK(lcp(b, h[0], h[1]) == 2);
    CHECK(lcp(b, h[2], h[3]) == 0);
    CHECK(lcp(b, h[4], h[5]) == 3);
    CHECK(lcp(b, h[0], h[0]) == 3);

    StringSet r = small_alphabet_set(200, 8);
    std::mt19937_64 rng(1);
    for (int i = 0; i < 2000; ++i) {
        const auto x = r.handles()[rng() % r.size()];
        const auto y = r.handles()[rng() % r.size()];
        REQUIRE(lcp(r.buffer(), x, y) == lcp(r.buffer(), y, x));
    }
}

TEST_CASE("lcp_array_oracle") {
    auto a = lcp_array_oracle(make_string_set({"ab", "abc", "abd"}));
    CHECK(a.values == std::vector<std::size_t>{lcp_undefined, 2, 2});
    CHECK(a.sum() == 4);
    CHECK(lcp_array_oracle(make_string_set({"a"})).values ==
          std::vector<std::size_t>{lcp_undefined});
    CHECK(lcp_array_oracle(make_string_set({"x", "x"})).values ==
          std::vector<std::size_t>{lcp_undefined, 1});

    try {
        lcp_array_oracle(make_string_set({"a", "c", "b"}));
        FAIL("expected NotSortedError");
    }
    catch (const NotSortedError& e) {
        CHECK(e.index() == 2);
    }
}

TEST_CASE("verify reports") {
    StringSet in = make_string_set({"a", "b", "c", "d"});
    CHECK(verify(in, in).ok());

    auto missing = in.handles();
    missing.pop_back();
    auto r1 = verify(in, in.with_handles(missing));
    CHECK(r1.failure == VerifyReport::Failure::permutation);
    CHECK(r1.index == 3);

    auto dup = in.handles();
    dup[3] = dup[2];
    CHECK(verify(in, in.with_handles(dup)).failure ==
          VerifyReport::Failure::permutation);

    auto swapped = in.handles();
    std::swap(swapped[1], swapped[2]);
    auto r2 = verify(in, in.with_handles(swapped));
    CHECK(r2.failure == VerifyReport::Failure::order);
    CHECK(r2.index == 2);

    StringSet other = make_string_set({"a", "b", "c", "d"});
    CHECK(verify(in, other).failure == VerifyReport::Failure::permutation);
}

TEST_CASE("dist_stats examples") {
    auto a = dist_stats(make_string_set({"a", "b"}));
    CHECK(a.L == 0);
    CHECK(a.D == 2);
    auto b = dist_stats(make_string_set({"ab", "ab"}));
    CHECK(b.L == 2);
    CHECK(b.D == 6);
    auto c = dist_stats(StringSet());
    CHECK(c.L == 0);
    CHECK(c.D == 0);
    CHECK(dist_stats(make_string_set({"abc", "ab"})).avg_len ==
          doctest::Approx(2.5));
}

TEST_CASE("D >= L on generated instances") {
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        auto st = dist_stats(small_alphabet_set(1 + seed * 13, seed));
        CHECK(st.D >= st.L);
        auto st2 = dist_stats(random_set(1 + seed * 7, seed));
        CHECK(st2.D >= st2.L);
    }
    auto st = dist_stats(equal_set(50));
    CHECK(st.D >= st.L);
}

/******************************************************************************/
