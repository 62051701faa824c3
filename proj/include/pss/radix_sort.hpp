/*******************************************************************************
 * include/pss/radix_sort.hpp
 *
 * MSD radix sorts: 8-bit in-place with cycle-walking permutation, and an
 * adaptive out-of-place variant using 16-bit digits on large subproblems.
 *
 *******************************************************************************
 * Published under the Boost Software License, Version 1.0
 ******************************************************************************/

#ifndef PSS_RADIX_SORT_HEADER
#define PSS_RADIX_SORT_HEADER

#include <pss/counters.hpp>
#include <pss/share.hpp>
#include <pss/string_set.hpp>

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace pss {

inline constexpr std::size_t radix_base_threshold = 64;

//! subproblems of at least this size use 16-bit digits
inline constexpr std::size_t radix16_threshold = 65536;

//! called with every character position read from the buffer
using ReadObserver = std::function<void(StringHandle, std::size_t)>;

struct Radix8Context {
    const CharBuffer* buf = nullptr;
    std::span<StringHandle> strings;
    const ReadObserver* observer = nullptr;
};

/*!
 * Sort strings[begin,end) sharing depth characters in place. Buffer reads are
 * counted as buffer_accesses. With a hook, pending buckets are released
 * oldest-first while other workers are idle.
 */
void radix8_range(const Radix8Context& ctx, std::size_t begin, std::size_t end,
                  std::size_t depth, SortCounters& counters,
                  const ShareHook* hook = nullptr);

void radix8_inplace(const CharBuffer& buf, std::span<StringHandle> strings,
                    std::size_t depth, SortCounters* counters = nullptr,
                    const ReadObserver* observer = nullptr);

StringSet radix8_inplace(StringSet set, std::size_t depth = 0);

//! one distribution step of the adaptive sorter
struct RadixStep {
    std::size_t begin, end, depth;
    //! 16 for a 16-bit distribution, 8 for a range handed to radix8_inplace
    unsigned bits;
};

struct Radix16Options {
    std::size_t threshold = radix16_threshold;
    std::vector<RadixStep>* trace = nullptr;
};

//! scratch.size() must be at least strings.size()
void radix16_adaptive(const CharBuffer& buf, std::span<StringHandle> strings,
                      std::span<StringHandle> scratch, std::size_t depth,
                      SortCounters* counters = nullptr,
                      const Radix16Options& options = {});

StringSet radix16_adaptive(StringSet set, std::size_t depth = 0,
                           const Radix16Options& options = {});

//! 16-bit digit at depth: two characters, second forced to 0 after a terminator
inline std::uint16_t radix16_digit(const CharBuffer& buf, StringHandle s,
                                   std::size_t depth) {
    const std::uint8_t c1 = buf.at(s, depth);
    const std::uint8_t c2 = c1 == 0 ? 0 : buf.at(s, depth + 1);
    return static_cast<std::uint16_t>((c1 << 8) | c2);
}

} // namespace pss

#endif // !PSS_RADIX_SORT_HEADER

/******************************************************************************/
