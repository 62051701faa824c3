/*******************************************************************************
 * tests/test_radix.cpp
 *
 *******************************************************************************
 * Published under the Boost Software License, Version 1.0
 ******************************************************************************/

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "test_util.hpp"

#include <pss/mkqs.hpp>
#include <pss/radix_sort.hpp>

#include <atomic>
#include <cstdlib>
#include <map>
#include <new>

// allocation instrumentation for the in-place sorter: peak live bytes
namespace {
std::atomic<bool> g_track{false};
std::atomic<std::ptrdiff_t> g_live{0};
std::atomic<std::ptrdiff_t> g_peak{0};
constexpr std::size_t header = 16;
} // namespace

void* operator new(std::size_t size) {
    auto* p = static_cast<unsigned char*>(std::malloc(size + header));
    if (!p) throw std::bad_alloc();
    *reinterpret_cast<std::size_t*>(p) = size;
    if (g_track.load(std::memory_order_relaxed)) {
        const std::ptrdiff_t live = g_live += static_cast<std::ptrdiff_t>(size);
        std::ptrdiff_t peak = g_peak.load();
        while (live > peak && !g_peak.compare_exchange_weak(peak, live)) { }
    }
    return p + header;
}
void operator delete(void* q) noexcept {
    if (!q) return;
    auto* p = static_cast<unsigned char*>(q) - header;
    if (g_track.load(std::memory_order_relaxed))
        g_live -= static_cast<std::ptrdiff_t>(*reinterpret_cast<std::size_t*>(p));
    std::free(p);
}
void operator delete(void* q, std::size_t) noexcept { operator delete(q); }

using namespace pss;
using namespace pss_test;

TEST_CASE("radix8 small and degenerate") {
    CHECK(radix8_inplace(make_string_set({"b", "a"})).strings() ==
          std::vector<std::string>{"a", "b"});
    CHECK(radix8_inplace(StringSet()).empty());
    auto eq = equal_set(1000, "abcabcabcabcabcabcabc");
    CHECK(verify(eq, radix8_inplace(eq)).ok());
    auto em = empty_strings_set(1000);
    CHECK(verify(em, radix8_inplace(em)).ok());
}

TEST_CASE("radix8 matches reference sort") {
    for (std::uint64_t seed = 0; seed < 4; ++seed) {
        auto in = seed % 2 ? small_alphabet_set(10000, seed) : random_set(10000, seed);
        auto out = radix8_inplace(in);
        CHECK(verify(in, out).ok());
        CHECK(out.strings() == sorted_contents(in));
    }
    auto cl = cluster_set(5000, 9);
    CHECK(radix8_inplace(cl).strings() == sorted_contents(cl));
}

TEST_CASE("radix8 allocates no scratch proportional to n") {
    auto in = random_set(200000, 21);
    std::vector<StringHandle> hs = in.handles();
    g_live = 0;
    g_peak = 0;
    g_track = true;
    radix8_inplace(in.buffer(), hs, 0);
    g_track = false;
    const auto peak = static_cast<std::size_t>(g_peak.load());
    CHECK(peak < 64 * 1024);
    CHECK(peak < hs.size() * sizeof(StringHandle) / 16);
    CHECK(verify_order(in.buffer(), hs).ok());
}

TEST_CASE("radix8 never reads past a terminator") {
    auto in = small_alphabet_set(20000, 5, 12);
    std::map<std::size_t, std::size_t> max_pos;
    ReadObserver obs = [&](StringHandle s, std::size_t pos) {
        auto& m = max_pos[s.offset];
        m = std::max(m, pos);
    };
    std::vector<StringHandle> hs = in.handles();
    SortCounters c;
    radix8_inplace(in.buffer(), hs, 0, &c, &obs);
    CHECK(verify_order(in.buffer(), hs).ok());
    bool ok = true;
    for (auto [off, pos] : max_pos)
        ok = ok && pos <= in.buffer().length(StringHandle{off});
    CHECK(ok);
    CHECK(c.buffer_accesses > 0);
}

TEST_CASE("radix16 two-character strings in one pass") {
    std::vector<std::string> v;
    for (char a = 'a'; a <= 'z'; ++a)
        for (char b = 'A'; b <= 'Z'; ++b) v.push_back(std::string{b, a});
    std::mt19937_64 rng(3);
    std::shuffle(v.begin(), v.end(), rng);
    auto in = make_string_set(v);
    std::vector<RadixStep> trace;
    Radix16Options opt;
    opt.threshold = 16;
    opt.trace = &trace;
    auto out = radix16_adaptive(in, 0, opt);
    CHECK(out.strings() == sorted_contents(in));
    REQUIRE(trace.size() == 1);
    CHECK(trace[0].bits == 16);
}

TEST_CASE("radix16 below threshold delegates") {
    auto in = random_set(1000, 4);
    std::vector<RadixStep> trace;
    Radix16Options opt;
    opt.trace = &trace;
    auto out = radix16_adaptive(in, 0, opt);
    CHECK(out.strings() == sorted_contents(in));
    REQUIRE(trace.size() == 1);
    CHECK(trace[0].bits == 8);
}

TEST_CASE("radix16 mixed corpora agree with mkqs") {
    Radix16Options small;
    small.threshold = 100;
    std::vector<StringSet> corpora = {
        random_set(100000, 1), small_alphabet_set(20000, 2), equal_set(3000),
        empty_strings_set(500), cluster_set(8000, 3), url_set(8000, 4),
        suffix_set(word_text(10000, 5), 10000)};
    for (auto& in : corpora) {
        auto out = radix16_adaptive(in, 0, small);
        CHECK(verify(in, out).ok());
        CHECK(out.strings() == mkqs(in).strings());
        auto out2 = radix16_adaptive(in);
        CHECK(out2.strings() == out.strings());
        CHECK(radix8_inplace(in).strings() == out.strings());
    }
}

/******************************************************************************/
