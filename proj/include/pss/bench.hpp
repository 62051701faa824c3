/*******************************************************************************
 * include/pss/bench.hpp
 *
 * Corpus generators, algorithm registry, timed benchmark runs and their CSV and
 * table output, and the command line front end.
 *
 *******************************************************************************
 * Published under the Boost Software License, Version 1.0
 ******************************************************************************/

#ifndef PSS_BENCH_HEADER
#define PSS_BENCH_HEADER

#include <pss/counters.hpp>
#include <pss/string_set.hpp>

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace pss {

/******************************************************************************/
// Generators

//! n strings of uniform length in [0,20) over characters [33,127)
StringSet gen_random(std::size_t n, std::uint64_t seed);

//! space separated words from a small vocabulary, bytes long
std::string gen_text(std::size_t bytes, std::uint64_t seed);

//! the first limit suffixes of text; throws on an empty text or a zero byte
StringSet gen_suffixes(std::string_view text,
                       std::size_t limit = static_cast<std::size_t>(-1));

//! n URL-like strings with long shared host and path prefixes
StringSet gen_url_like(std::size_t n, std::uint64_t seed);

/******************************************************************************/
// Algorithm registry

//! sorts set.handles() in place using threads workers
using SortFunction =
    std::function<void(StringSet& set, std::size_t threads, SortCounters& counters)>;

struct AlgorithmInfo {
    std::string id;
    std::string description;
    SortFunction sort;
};

//! adds or replaces an algorithm
void register_algorithm(std::string id, std::string description,
                        SortFunction sort);

const AlgorithmInfo* find_algorithm(std::string_view id);

std::vector<AlgorithmInfo> algorithms();

/******************************************************************************/
// Runs

enum class OutputFormat { table, csv };

struct RunConfig {
    std::string algorithm = "ps5";
    //! newline separated input file; empty selects the generator
    std::string input;
    //! random, suffix or url
    std::string generator = "random";
    //! string count limit (generated count for random and url)
    std::size_t n = 100000;
    //! byte prefix limit of the input file or suffix text; 0 = none
    std::size_t bytes = 0;
    std::size_t threads = 1;
    std::size_t reps = 1;
    std::uint64_t seed = 1;
    bool verify = false;
    OutputFormat format = OutputFormat::table;
    //! include counters in table output
    bool counters = false;
};

struct RepResult {
    double time_ms = 0;
    SortCounters counters;
    //! present when verification was requested
    std::optional<bool> verified;
};

struct RunResult {
    std::string algorithm;
    std::size_t n = 0;
    //! total characters of the strings, excluding terminators
    std::size_t N = 0;
    std::size_t D = 0;
    std::size_t L = 0;
    std::size_t threads = 0;
    std::vector<RepResult> reps;
    double median_ms = 0;
    //! index of the repetition providing the median
    std::size_t median_rep = 0;
    std::string verify_message;

    //! false if any requested verification failed
    bool ok() const;
};

//! load the input file or generate the corpus of a config
StringSet load_corpus(const RunConfig& config);

/*!
 * Load or generate the corpus once, then for each repetition restore the
 * handle array and time only the sort, scratch allocation included. Throws
 * std::invalid_argument on an unknown algorithm and std::runtime_error on an
 * unreadable input.
 */
RunResult run(const RunConfig& config);

/******************************************************************************/
// Output

struct CsvRow {
    std::string algo;
    std::size_t n = 0, N = 0, D = 0, L = 0, threads = 0;
    //! repetition number or "median"
    std::string rep;
    double time_ms = 0;
    std::uint64_t char_comparisons = 0, buffer_accesses = 0, jobs = 0,
                  share_events = 0;
    //! pass, fail or skip
    std::string verify;

    friend bool operator==(const CsvRow&, const CsvRow&) = default;
};

std::string csv_header();

//! one row per repetition followed by the median row
std::vector<CsvRow> csv_rows(const RunResult& result);

std::string format_csv_row(const CsvRow& row);

//! throws std::invalid_argument on malformed rows
CsvRow parse_csv_row(std::string_view line);

void write_csv(std::ostream& os, const RunResult& result, bool header = true);

void write_table(std::ostream& os, const RunResult& result, bool counters);

/*!
 * Command line entry point. Returns 0 on success, 1 on usage or input errors
 * and 2 on verification failures.
 */
int bench_cli_main(int argc, const char* const* argv, std::ostream& out,
                   std::ostream& err);

} // namespace pss

#endif // !PSS_BENCH_HEADER

/******************************************************************************/
