/*******************************************************************************
 * tests/test_util.hpp
 *
 * Corpus generators and reference helpers shared by the unit tests.
 *
 *******************************************************************************
 * Published under the Boost Software License, Version 1.0
 ******************************************************************************/

#ifndef PSS_TEST_UTIL_HEADER
#define PSS_TEST_UTIL_HEADER

#include <pss/string_set.hpp>

#include <algorithm>
#include <random>
#include <string>
#include <vector>

namespace pss_test {

using pss::StringSet;

inline StringSet random_set(std::size_t n, std::uint64_t seed,
                            std::size_t max_len = 20, int lo = 33,
                            int hi = 127) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::size_t> len(0, max_len - 1);
    std::uniform_int_distribution<int> ch(lo, hi - 1);
    std::vector<std::string> v(n);
    for (auto& s : v) {
        s.resize(len(rng));
        for (auto& c : s) c = static_cast<char>(ch(rng));
    }
    return pss::make_string_set(v);
}

//! small alphabet gives long LCPs and many duplicates
inline StringSet small_alphabet_set(std::size_t n, std::uint64_t seed,
                                    std::size_t max_len = 24) {
    return random_set(n, seed, max_len, 'a', 'd');
}

inline StringSet equal_set(std::size_t n, const std::string& s = "abcdefghijk") {
    return pss::make_string_set(std::vector<std::string>(n, s));
}

inline StringSet empty_strings_set(std::size_t n) {
    return pss::make_string_set(std::vector<std::string>(n));
}

//! clusters of strings sharing 8 or 16 character prefixes
inline StringSet cluster_set(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    const std::vector<std::string> prefixes = {
        "aaaaaaaa", "aaaaaaab", "prefix00", "prefix00prefix01", "zzzzzzzz",
        "prefix00prefix00"};
    std::uniform_int_distribution<std::size_t> pick(0, prefixes.size() - 1);
    std::uniform_int_distribution<std::size_t> len(0, 10);
    std::uniform_int_distribution<int> ch('a', 'e');
    std::vector<std::string> v(n);
    for (auto& s : v) {
        s = prefixes[pick(rng)];
        const std::size_t l = len(rng);
        for (std::size_t i = 0; i < l; ++i) s += static_cast<char>(ch(rng));
    }
    return pss::make_string_set(v);
}

//! text of random words from a small vocabulary, separated by spaces
inline std::string word_text(std::size_t bytes, std::uint64_t seed) {
    static const char* words[] = {"the", "of", "and", "to", "in", "string",
                                  "sort", "sample", "merge", "tree", "a",
                                  "parallel", "prefix", "lcp", "radix"};
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::size_t> pick(0, std::size(words) - 1);
    std::string t;
    while (t.size() < bytes) {
        t += words[pick(rng)];
        t += ' ';
    }
    t.resize(bytes);
    return t;
}

//! all suffixes of text, each its own zero-terminated string in one buffer
inline StringSet suffix_set(const std::string& text, std::size_t limit) {
    std::vector<std::uint8_t> data(text.begin(), text.end());
    data.push_back(0);
    auto buf = std::make_shared<const pss::CharBuffer>(std::move(data));
    std::vector<pss::StringHandle> hs;
    for (std::size_t i = 0; i < std::min(limit, text.size()); ++i)
        hs.push_back(pss::StringHandle{i});
    return StringSet(std::move(buf), std::move(hs));
}

inline StringSet url_set(std::size_t n, std::uint64_t seed) {
    static const char* hosts[] = {"http://www.example.com/", "http://example.org/",
                                  "https://www.example.com/", "http://a.b.c/"};
    static const char* dirs[] = {"index", "wiki/", "docs/", "api/v1/", "img/"};
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::size_t> h(0, std::size(hosts) - 1);
    std::uniform_int_distribution<std::size_t> d(0, std::size(dirs) - 1);
    std::uniform_int_distribution<int> depth(0, 3), num(0, 999);
    std::vector<std::string> v(n);
    for (auto& s : v) {
        s = hosts[h(rng)];
        const int k = depth(rng);
        for (int i = 0; i < k; ++i) s += dirs[d(rng)];
        s += std::to_string(num(rng));
    }
    return pss::make_string_set(v);
}

inline std::vector<std::string> sorted_contents(const StringSet& set) {
    auto v = set.strings();
    std::sort(v.begin(), v.end());
    return v;
}

//! LCP array with index 0 normalized, for comparisons of raw spans
inline std::vector<std::size_t> oracle_lcps(const StringSet& sorted) {
    return pss::lcp_array_oracle(sorted).values;
}

} // namespace pss_test

#endif // !PSS_TEST_UTIL_HEADER

/******************************************************************************/
