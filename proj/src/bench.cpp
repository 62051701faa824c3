/*******************************************************************************
 * src/bench.cpp
 *
 *******************************************************************************
 * Published under the Boost Software License, Version 1.0
 ******************************************************************************/

#include <pss/bench.hpp>

#include <pss/insertion_sort.hpp>
#include <pss/lcp_merge.hpp>
#include <pss/mkqs.hpp>
#include <pss/parallel.hpp>
#include <pss/radix_sort.hpp>
#include <pss/sample_sort.hpp>

#include <CLI11.hpp>

#include <algorithm>
#include <charconv>
#include <chrono>
#include <fstream>
#include <iomanip>
#include <iterator>
#include <map>
#include <mutex>
#include <numeric>
#include <ostream>
#include <random>
#include <sstream>

namespace pss {

/******************************************************************************/
// Generators

StringSet gen_random(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::size_t> len(0, 19);
    std::uniform_int_distribution<int> chr(33, 126);
    std::vector<std::uint8_t> data;
    data.reserve(n * 11);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t l = len(rng);
        for (std::size_t j = 0; j < l; ++j)
            data.push_back(static_cast<std::uint8_t>(chr(rng)));
        data.push_back(0);
    }
    auto buf = std::make_shared<const CharBuffer>(std::move(data));
    auto handles = buf->scan_handles();
    return StringSet(std::move(buf), std::move(handles));
}

std::string gen_text(std::size_t bytes, std::uint64_t seed) {
    static const char* words[] = {
        "the",   "of",    "and",     "to",    "in",     "a",      "is",
        "that",  "for",   "it",      "as",    "was",    "with",   "be",
        "by",    "on",    "not",     "he",    "this",   "are",    "or",
        "his",   "from",  "at",      "which", "but",    "have",   "an",
        "had",   "they",  "you",     "were",  "their",  "one",    "all",
        "we",    "can",   "her",     "has",   "there",  "been",   "if",
        "more",  "when",  "will",    "would", "who",    "so",     "no",
        "string", "sort", "parallel", "merge", "sample", "prefix", "radix"};
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::size_t> pick(0, std::size(words) - 1);
    std::string text;
    text.reserve(bytes + 16);
    while (text.size() < bytes) {
        if (!text.empty()) text += ' ';
        text += words[pick(rng)];
    }
    text.resize(bytes);
    return text;
}

StringSet gen_suffixes(std::string_view text, std::size_t limit) {
    if (text.empty())
        throw std::invalid_argument("gen_suffixes: empty text");
    if (text.find('\0') != std::string_view::npos)
        throw std::invalid_argument("gen_suffixes: text contains a zero byte");
    std::vector<std::uint8_t> data(text.begin(), text.end());
    auto buf = std::make_shared<const CharBuffer>(std::move(data));
    const std::size_t n = std::min(limit, text.size());
    std::vector<StringHandle> handles(n);
    for (std::size_t i = 0; i < n; ++i) handles[i] = StringHandle{i};
    return StringSet(std::move(buf), std::move(handles));
}

StringSet gen_url_like(std::size_t n, std::uint64_t seed) {
    static const char* hosts[] = {
        "http://www.example.com/", "https://www.example.com/",
        "http://en.wikipedia.example.org/wiki/", "http://example.net/",
        "https://docs.example.org/reference/", "http://shop.example.com/item/"};
    static const char* dirs[] = {"index", "news/", "archive/", "2013/",
                                 "category/", "page/", "api/v2/", "img/"};
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::size_t> h(0, std::size(hosts) - 1);
    std::uniform_int_distribution<std::size_t> d(0, std::size(dirs) - 1);
    std::uniform_int_distribution<int> depth(0, 4);
    std::uniform_int_distribution<int> num(0, 99999);
    std::vector<std::uint8_t> data;
    for (std::size_t i = 0; i < n; ++i) {
        std::string s = hosts[h(rng)];
        const int k = depth(rng);
        for (int j = 0; j < k; ++j) s += dirs[d(rng)];
        s += std::to_string(num(rng));
        data.insert(data.end(), s.begin(), s.end());
        data.push_back(0);
    }
    auto buf = std::make_shared<const CharBuffer>(std::move(data));
    auto handles = buf->scan_handles();
    return StringSet(std::move(buf), std::move(handles));
}

/******************************************************************************/
// Algorithm registry

namespace {

void builtin_algorithms(std::map<std::string, AlgorithmInfo>& reg) {
    auto add = [&reg](std::string id, std::string desc, SortFunction f) {
        reg[id] = AlgorithmInfo{id, std::move(desc), std::move(f)};
    };
    add("insertion", "string insertion sort",
        [](StringSet& s, std::size_t, SortCounters&) {
            insertion_sort(s.buffer(), s.span(), 0);
        });
    add("lcp_insertion", "LCP insertion sort",
        [](StringSet& s, std::size_t, SortCounters& c) {
            std::vector<std::size_t> lcp(s.size());
            lcp_insertion_sort(s.buffer(), s.span(), lcp, 0, &c);
        });
    add("mkqs", "multikey quicksort", [](StringSet& s, std::size_t, SortCounters&) {
        mkqs(s.buffer(), s.span(), 0);
    });
    add("mkqs_cached", "caching multikey quicksort",
        [](StringSet& s, std::size_t, SortCounters& c) {
            mkqs_cached(s.buffer(), s.span(), {}, {}, 0, &c);
        });
    add("radix8", "in-place 8-bit MSD radix sort",
        [](StringSet& s, std::size_t, SortCounters& c) {
            radix8_inplace(s.buffer(), s.span(), 0, &c);
        });
    add("radix16", "adaptive 16-bit MSD radix sort",
        [](StringSet& s, std::size_t, SortCounters& c) {
            std::vector<StringHandle> scratch(s.size());
            radix16_adaptive(s.buffer(), s.span(), scratch, 0, &c);
        });
    add("s5_unroll", "sequential sample sort, unrolled classification",
        [](StringSet& s, std::size_t, SortCounters& c) {
            S5Config cfg;
            cfg.variant = ClassifyVariant::unroll;
            s5_sort(s.buffer(), s.span(), {}, {}, 0, cfg, &c);
        });
    add("s5_equal", "sequential sample sort, equality checking classification",
        [](StringSet& s, std::size_t, SortCounters& c) {
            S5Config cfg;
            cfg.variant = ClassifyVariant::equal;
            s5_sort(s.buffer(), s.span(), {}, {}, 0, cfg, &c);
        });
    add("lcp_mergesort", "binary LCP mergesort",
        [](StringSet& s, std::size_t, SortCounters& c) {
            s = binary_lcp_mergesort(std::move(s), &c).set;
        });
    add("ps5", "parallel sample sort, unrolled classification",
        [](StringSet& s, std::size_t p, SortCounters& c) {
            parallel_s5(s.buffer(), s.span(), {}, {}, p, S5Config{}, &c);
        });
    add("ps5_equal", "parallel sample sort, equality checking classification",
        [](StringSet& s, std::size_t p, SortCounters& c) {
            S5Config cfg;
            cfg.variant = ClassifyVariant::equal;
            parallel_s5(s.buffer(), s.span(), {}, {}, p, cfg, &c);
        });
    add("pmkqs", "parallel caching multikey quicksort",
        [](StringSet& s, std::size_t p, SortCounters& c) {
            parallel_mkqs(s.buffer(), s.span(), p, {}, &c);
        });
    add("pradix", "parallel MSD radix sort",
        [](StringSet& s, std::size_t p, SortCounters& c) {
            parallel_radix(s.buffer(), s.span(), p, &c);
        });
    for (bool cache : {true, false}) {
        add(cache ? "pmerge" : "pmerge_nocache",
            cache ? "4 parts by parallel sample sort, LCP merge with cached "
                    "characters"
                  : "4 parts by parallel sample sort, plain LCP merge",
            [cache](StringSet& s, std::size_t p, SortCounters& c) {
                PartitionedOptions opt;
                opt.parts = 4;
                opt.use_cache = cache;
                auto r = partitioned_merge_sort(std::move(s), p, opt);
                c += r.sort_counters;
                c += r.merge_counters;
                s = std::move(r.sorted.set);
            });
    }
}

struct Registry {
    std::mutex mutex;
    std::map<std::string, AlgorithmInfo> algorithms;

    Registry() { builtin_algorithms(algorithms); }
};

Registry& registry() {
    static Registry r;
    return r;
}

} // namespace

void register_algorithm(std::string id, std::string description,
                        SortFunction sort) {
    Registry& r = registry();
    std::lock_guard<std::mutex> lock(r.mutex);
    r.algorithms[id] = AlgorithmInfo{id, std::move(description), std::move(sort)};
}

const AlgorithmInfo* find_algorithm(std::string_view id) {
    Registry& r = registry();
    std::lock_guard<std::mutex> lock(r.mutex);
    auto it = r.algorithms.find(std::string(id));
    return it == r.algorithms.end() ? nullptr : &it->second;
}

std::vector<AlgorithmInfo> algorithms() {
    Registry& r = registry();
    std::lock_guard<std::mutex> lock(r.mutex);
    std::vector<AlgorithmInfo> out;
    for (const auto& [id, info] : r.algorithms) out.push_back(info);
    return out;
}

/******************************************************************************/
// Runs

bool RunResult::ok() const {
    for (const auto& r : reps)
        if (r.verified && !*r.verified) return false;
    return true;
}

StringSet load_corpus(const RunConfig& config) {
    StringSet set;
    if (!config.input.empty()) {
        std::ifstream in(config.input, std::ios::binary);
        if (!in)
            throw std::runtime_error("cannot read input file: " + config.input);
        std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                        std::istreambuf_iterator<char>());
        if (in.bad())
            throw std::runtime_error("cannot read input file: " + config.input);
        if (config.bytes > 0 && bytes.size() > config.bytes)
            bytes.resize(config.bytes);
        set = load_delimited(bytes, '\n');
        if (set.size() > config.n) set.handles().resize(config.n);
    }
    else if (config.generator == "random") {
        set = gen_random(config.n, config.seed);
    }
    else if (config.generator == "suffix") {
        set = gen_suffixes(gen_text(config.bytes ? config.bytes : config.n,
                                    config.seed),
                           config.n);
    }
    else if (config.generator == "url") {
        set = gen_url_like(config.n, config.seed);
    }
    else {
        throw std::invalid_argument("unknown generator: " + config.generator);
    }
    return set;
}

RunResult run(const RunConfig& config) {
    const AlgorithmInfo* algo = find_algorithm(config.algorithm);
    if (!algo)
        throw std::invalid_argument("unknown algorithm: " + config.algorithm);
    if (config.reps < 1)
        throw std::invalid_argument("repetitions must be at least 1");
    if (config.threads < 1)
        throw std::invalid_argument("threads must be at least 1");

    const StringSet input = load_corpus(config);

    RunResult result;
    result.algorithm = config.algorithm;
    result.threads = config.threads;
    result.n = input.size();
    for (StringHandle h : input.handles()) result.N += input.buffer().length(h);
    const DistStats st = dist_stats(input);
    result.D = st.D;
    result.L = st.L;

    for (std::size_t rep = 0; rep < config.reps; ++rep)
    {
        // fresh handle array in input order
        StringSet set = input.with_handles(input.handles());
        RepResult r;
        const auto start = std::chrono::steady_clock::now();
        algo->sort(set, config.threads, r.counters);
        const auto stop = std::chrono::steady_clock::now();
        r.time_ms =
            std::chrono::duration<double, std::milli>(stop - start).count();
        if (config.verify) {
            const VerifyReport v = verify(input, set);
            r.verified = v.ok();
            if (!v.ok() && result.verify_message.empty())
                result.verify_message = v.message;
        }
        result.reps.push_back(std::move(r));
    }

    std::vector<std::size_t> order(result.reps.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return result.reps[a].time_ms < result.reps[b].time_ms;
    });
    result.median_rep = order[(order.size() - 1) / 2];
    result.median_ms = result.reps[result.median_rep].time_ms;
    return result;
}

/******************************************************************************/
// Output

namespace {

std::string format_double(double v) {
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, end);
}

template <typename T>
T parse_number(std::string_view s, const char* field) {
    T v{};
    auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || end != s.data() + s.size())
        throw std::invalid_argument(std::string("bad CSV field ") + field +
                                    ": '" + std::string(s) + "'");
    return v;
}

std::string verify_word(const std::optional<bool>& v) {
    if (!v) return "skip";
    return *v ? "pass" : "fail";
}

CsvRow base_row(const RunResult& r) {
    CsvRow row;
    row.algo = r.algorithm;
    row.n = r.n;
    row.N = r.N;
    row.D = r.D;
    row.L = r.L;
    row.threads = r.threads;
    return row;
}

void fill_rep(CsvRow& row, const RepResult& rep) {
    row.time_ms = rep.time_ms;
    row.char_comparisons = rep.counters.char_comparisons;
    row.buffer_accesses = rep.counters.buffer_accesses;
    row.jobs = rep.counters.jobs;
    row.share_events = rep.counters.share_events;
    row.verify = verify_word(rep.verified);
}

} // namespace

std::string csv_header() {
    return "algo,n,N,D,L,threads,rep,time_ms,char_comparisons,buffer_accesses,"
           "jobs,share_events,verify";
}

std::vector<CsvRow> csv_rows(const RunResult& result) {
    std::vector<CsvRow> rows;
    for (std::size_t i = 0; i < result.reps.size(); ++i) {
        CsvRow row = base_row(result);
        row.rep = std::to_string(i);
        fill_rep(row, result.reps[i]);
        rows.push_back(std::move(row));
    }
    if (!result.reps.empty()) {
        CsvRow row = base_row(result);
        row.rep = "median";
        fill_rep(row, result.reps[result.median_rep]);
        row.verify = result.ok() ? rows.front().verify : "fail";
        rows.push_back(std::move(row));
    }
    return rows;
}

std::string format_csv_row(const CsvRow& row) {
    std::ostringstream os;
    os << row.algo << ',' << row.n << ',' << row.N << ',' << row.D << ','
       << row.L << ',' << row.threads << ',' << row.rep << ','
       << format_double(row.time_ms) << ',' << row.char_comparisons << ','
       << row.buffer_accesses << ',' << row.jobs << ',' << row.share_events
       << ',' << row.verify;
    return os.str();
}

CsvRow parse_csv_row(std::string_view line) {
    std::vector<std::string_view> f;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = line.find(',', start);
        f.push_back(line.substr(start, comma - start));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    if (f.size() != 13)
        throw std::invalid_argument("CSV row must have 13 fields, got " +
                                    std::to_string(f.size()));
    CsvRow row;
    row.algo = f[0];
    row.n = parse_number<std::size_t>(f[1], "n");
    row.N = parse_number<std::size_t>(f[2], "N");
    row.D = parse_number<std::size_t>(f[3], "D");
    row.L = parse_number<std::size_t>(f[4], "L");
    row.threads = parse_number<std::size_t>(f[5], "threads");
    row.rep = f[6];
    row.time_ms = parse_number<double>(f[7], "time_ms");
    row.char_comparisons = parse_number<std::uint64_t>(f[8], "char_comparisons");
    row.buffer_accesses = parse_number<std::uint64_t>(f[9], "buffer_accesses");
    row.jobs = parse_number<std::uint64_t>(f[10], "jobs");
    row.share_events = parse_number<std::uint64_t>(f[11], "share_events");
    row.verify = f[12];
    return row;
}

void write_csv(std::ostream& os, const RunResult& result, bool header) {
    if (header) os << csv_header() << '\n';
    for (const CsvRow& row : csv_rows(result)) os << format_csv_row(row) << '\n';
}

void write_table(std::ostream& os, const RunResult& result, bool counters) {
    os << "algorithm " << result.algorithm << "  threads " << result.threads
       << "\n";
    os << "n " << result.n << "  N " << result.N << "  D " << result.D
       << "  L " << result.L << "\n";
    os << std::fixed << std::setprecision(3);
    for (std::size_t i = 0; i < result.reps.size(); ++i) {
        const RepResult& r = result.reps[i];
        os << "  rep " << std::setw(3) << i << "  " << std::setw(12)
           << r.time_ms << " ms";
        if (counters) {
            os << "  cmp " << r.counters.char_comparisons << "  access "
               << r.counters.buffer_accesses << "  jobs " << r.counters.jobs
               << "  shares " << r.counters.share_events;
        }
        if (r.verified) os << "  " << (*r.verified ? "pass" : "FAIL");
        os << "\n";
    }
    os << "  median     " << std::setw(12) << result.median_ms << " ms\n";
    os << std::defaultfloat;
}

/******************************************************************************/
// Command line

int bench_cli_main(int argc, const char* const* argv, std::ostream& out,
                   std::ostream& err) {
    RunConfig cfg;
    cfg.threads = default_threads();
    std::string format = "table";
    bool list = false;

    CLI::App app{"Benchmark driver for the string sorters"};
    app.add_option("--algo", cfg.algorithm, "algorithm id (see --list)");
    auto* input = app.add_option("--input", cfg.input,
                                 "newline separated input file");
    auto* gen = app.add_option("--gen", cfg.generator, "generator")
                    ->check(CLI::IsMember({"random", "suffix", "url"}));
    input->excludes(gen);
    app.add_option("--n", cfg.n, "string count limit");
    app.add_option("--bytes", cfg.bytes, "byte prefix limit, 0 for none");
    app.add_option("--threads", cfg.threads, "worker threads")
        ->check(CLI::PositiveNumber);
    app.add_option("--reps", cfg.reps, "repetitions")->check(CLI::PositiveNumber);
    app.add_option("--seed", cfg.seed, "generator seed");
    app.add_flag("--verify", cfg.verify, "verify every sorted output");
    app.add_option("--format", format, "output format")
        ->check(CLI::IsMember({"table", "csv"}));
    app.add_flag("--counters", cfg.counters, "show counters in table output");
    app.add_flag("--list", list, "list algorithms and exit");

    try {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError& e) {
        return app.exit(e, out, err) == 0 ? 0 : 1;
    }

    if (list) {
        for (const auto& a : algorithms())
            out << std::left << std::setw(16) << a.id << a.description << "\n";
        return 0;
    }
    cfg.format = format == "csv" ? OutputFormat::csv : OutputFormat::table;

    RunResult result;
    try {
        result = run(cfg);
    }
    catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }

    if (cfg.format == OutputFormat::csv)
        write_csv(out, result);
    else
        write_table(out, result, cfg.counters);

    if (!result.ok()) {
        err << "verification failed: " << result.verify_message << "\n";
        return 2;
    }
    return 0;
}

} // namespace pss

/******************************************************************************/
