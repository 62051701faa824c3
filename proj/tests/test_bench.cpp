/*******************************************************************************
 * tests/test_bench.cpp
 *
 *******************************************************************************
 * Published under the Boost Software License, Version 1.0
 ******************************************************************************/

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "test_util.hpp"

#include <pss/bench.hpp>

#include <algorithm>
#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace pss;
using namespace pss_test;

namespace {

int cli(std::vector<std::string> args, std::string* out_text = nullptr,
        std::string* err_text = nullptr) {
    args.insert(args.begin(), "pss_bench");
    std::vector<const char*> argv;
    for (auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int rc = bench_cli_main(static_cast<int>(argv.size()), argv.data(), out, err);
    if (out_text) *out_text = out.str();
    if (err_text) *err_text = err.str();
    return rc;
}

std::vector<std::string> lines_of(const std::string& s) {
    std::vector<std::string> v;
    std::istringstream is(s);
    for (std::string line; std::getline(is, line);) v.push_back(line);
    return v;
}

} // namespace

TEST_CASE("gen_random shape and determinism") {
    CHECK(gen_random(0, 1).empty());
    auto a = gen_random(5000, 3), b = gen_random(5000, 3);
    CHECK(a.strings() == b.strings());
    CHECK(a.strings() != gen_random(5000, 4).strings());
    for (const auto& s : a.strings()) {
        REQUIRE(s.size() < 20);
        for (unsigned char c : s) REQUIRE((c >= 33 && c < 127));
    }
}

TEST_CASE("gen_random character histogram is close to uniform") {
    auto set = gen_random(1000000, 5);
    std::array<std::size_t, 256> hist{};
    std::size_t total = 0;
    std::array<std::size_t, 20> len_hist{};
    for (StringHandle h : set.handles()) {
        auto v = set.buffer().view(h);
        ++len_hist[v.size()];
        for (unsigned char c : v) ++hist[c];
        total += v.size();
    }
    // chi-square over 94 cells; 99.9% quantile for 93 degrees of freedom ~ 140
    const double expect = static_cast<double>(total) / 94.0;
    double chi2 = 0;
    for (int c = 33; c < 127; ++c) {
        const double d = static_cast<double>(hist[c]) - expect;
        chi2 += d * d / expect;
    }
    CHECK(chi2 < 140.0);
    for (std::size_t l = 0; l < 20; ++l)
        CHECK(len_hist[l] == doctest::Approx(50000).epsilon(0.03));
}

TEST_CASE("gen_suffixes") {
    CHECK(gen_suffixes("ab").strings() == std::vector<std::string>{"ab", "b"});
    auto banana = gen_suffixes("banana");
    CHECK(sorted_contents(banana) ==
          std::vector<std::string>{"a", "ana", "anana", "banana", "na", "nana"});
    CHECK(gen_suffixes("banana", 3).strings() ==
          std::vector<std::string>{"banana", "anana", "nana"});
    CHECK_THROWS_AS(gen_suffixes(std::string("a\0b", 3)), std::invalid_argument);
    CHECK_THROWS_AS(gen_suffixes(""), std::invalid_argument);
}

TEST_CASE("run: end-to-end smoke with verification") {
    RunConfig cfg;
    cfg.algorithm = "ps5";
    cfg.n = 10000;
    cfg.threads = 2;
    cfg.reps = 3;
    cfg.verify = true;
    RunResult r = run(cfg);
    CHECK(r.reps.size() == 3);
    CHECK(r.ok());
    for (auto& rep : r.reps) CHECK(rep.verified == true);
    CHECK(r.n == 10000);

    const DistStats st = dist_stats(gen_random(10000, cfg.seed));
    CHECK(r.D == st.D);
    CHECK(r.L == st.L);
    std::vector<double> times;
    for (auto& rep : r.reps) times.push_back(rep.time_ms);
    std::sort(times.begin(), times.end());
    CHECK(r.median_ms == times[1]);
}

TEST_CASE("run: sequential counters are reproducible") {
    for (const char* algo : {"mkqs_cached", "s5_unroll", "lcp_mergesort", "ps5"}) {
        RunConfig cfg;
        cfg.algorithm = algo;
        cfg.n = 20000;
        cfg.threads = 1;
        cfg.reps = 2;
        auto a = run(cfg), b = run(cfg);
        CHECK(a.reps[0].counters == a.reps[1].counters);
        CHECK(a.reps[0].counters == b.reps[0].counters);
    }
}

TEST_CASE("every registered algorithm sorts every generator") {
    for (const auto& algo : algorithms()) {
        for (const char* gen : {"random", "suffix", "url"}) {
            RunConfig cfg;
            cfg.algorithm = algo.id;
            cfg.generator = gen;
            cfg.n = 3000;
            cfg.threads = 3;
            cfg.verify = true;
            INFO(algo.id << " " << gen);
            CHECK(run(cfg).ok());
        }
    }
}

TEST_CASE("run errors") {
    RunConfig cfg;
    cfg.algorithm = "no_such_sorter";
    CHECK_THROWS_AS(run(cfg), std::invalid_argument);
    cfg.algorithm = "mkqs";
    cfg.input = "/nonexistent/input/file";
    CHECK_THROWS_AS(run(cfg), std::runtime_error);
}

TEST_CASE("CSV rows round-trip") {
    RunConfig cfg;
    cfg.algorithm = "radix16";
    cfg.n = 2000;
    cfg.reps = 3;
    cfg.verify = true;
    auto r = run(cfg);
    auto rows = csv_rows(r);
    REQUIRE(rows.size() == 4);
    CHECK(rows.back().rep == "median");
    CHECK(rows.back().time_ms == r.median_ms);
    for (const auto& row : rows) {
        const std::string line = format_csv_row(row);
        CHECK(parse_csv_row(line) == row);
        CHECK(format_csv_row(parse_csv_row(line)) == line);
    }
    CHECK_THROWS_AS(parse_csv_row("a,b"), std::invalid_argument);
    CHECK_THROWS_AS(parse_csv_row("a,x,1,1,1,1,0,1,1,1,1,1,pass"),
                    std::invalid_argument);
}

TEST_CASE("CLI: csv output, errors and verification failure") {
    std::string out, err;
    CHECK(cli({"--algo", "mkqs", "--n", "500", "--reps", "2", "--threads", "1",
               "--verify", "--format", "csv"},
              &out) == 0);
    auto lines = lines_of(out);
    REQUIRE(lines.size() == 4);
    CHECK(lines[0] == csv_header());
    CHECK(parse_csv_row(lines[3]).rep == "median");
    CHECK(parse_csv_row(lines[1]).verify == "pass");

    CHECK(cli({"--algo", "unknown"}, &out, &err) != 0);
    CHECK(err.find("unknown algorithm") != std::string::npos);
    CHECK(cli({"--algo", "mkqs", "--input", "/nonexistent"}, &out, &err) != 0);
    CHECK(cli({"--bogus-flag"}, &out, &err) != 0);
    CHECK(cli({"--input", "x", "--gen", "random"}, &out, &err) != 0);
    CHECK(cli({"--list"}, &out) == 0);
    CHECK(out.find("pmerge") != std::string::npos);

    // deliberately broken sorter: reverses the input
    register_algorithm("broken_reverse", "test only",
                       [](StringSet& s, std::size_t, SortCounters&) {
                           std::reverse(s.handles().begin(), s.handles().end());
                       });
    CHECK(cli({"--algo", "broken_reverse", "--n", "100", "--verify"}, &out, &err) == 2);
    CHECK(err.find("verification failed") != std::string::npos);
}

TEST_CASE("CLI: file input with byte and count limits") {
    const auto path = std::filesystem::temp_directory_path() / "pss_bench_input.txt";
    {
        std::ofstream f(path, std::ios::binary);
        f << "delta\nalpha\ncharlie\nbravo\necho\n";
    }
    RunConfig cfg;
    cfg.algorithm = "s5_unroll";
    cfg.input = path.string();
    auto all = load_corpus(cfg);
    CHECK(all.strings() ==
          std::vector<std::string>{"delta", "alpha", "charlie", "bravo", "echo"});
    cfg.n = 2;
    CHECK(load_corpus(cfg).size() == 2);
    cfg.n = 100;
    cfg.bytes = 8;
    CHECK(load_corpus(cfg).strings() == std::vector<std::string>{"delta", "al"});

    std::string out;
    CHECK(cli({"--algo", "pmkqs", "--input", path.string(), "--verify",
               "--counters"},
              &out) == 0);
    CHECK(out.find("pass") != std::string::npos);
    std::filesystem::remove(path);
}
