/*******************************************************************************
 * include/pss/string_set.hpp
 *
 * Zero-terminated string sets over a shared read-only character buffer, packed
 * word keys, LCP primitives and brute-force verification routines.
 *
 *******************************************************************************
 * Published under the Boost Software License, Version 1.0
 ******************************************************************************/

#ifndef PSS_STRING_SET_HEADER
#define PSS_STRING_SET_HEADER

#include <compare>
#include <cstddef>
#include <cstdint>
#include <cstring>
#include <limits>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace pss {

//! packed characters, first character in the most significant byte
using key_type = std::uint64_t;

//! number of characters packed into one key
inline constexpr std::size_t key_width = sizeof(key_type);

//! Byte offset of a string's first character inside a CharBuffer.
struct StringHandle {
    std::size_t offset = 0;

    friend constexpr bool operator==(StringHandle, StringHandle) = default;
    friend constexpr auto operator<=>(StringHandle, StringHandle) = default;
};

/*!
 * Immutable sequence of zero-terminated strings. The buffer always ends with a
 * terminator and carries key_width extra zero bytes so that a full key can be
 * loaded at any depth up to and including a string's terminator.
 */
class CharBuffer
{
public:
    CharBuffer();

    //! takes zero-delimited bytes, appending a final terminator if missing
    explicit CharBuffer(std::vector<std::uint8_t> bytes);

    //! logical size in bytes, excluding padding
    std::size_t size() const { return size_; }

    const std::uint8_t* data() const { return data_.data(); }

    const std::uint8_t* chars(StringHandle h) const {
        return data_.data() + h.offset;
    }

    std::uint8_t at(StringHandle h, std::size_t depth) const {
        return data_[h.offset + depth];
    }

    std::size_t length(StringHandle h) const {
        return std::strlen(reinterpret_cast<const char*>(chars(h)));
    }

    std::string_view view(StringHandle h) const {
        return {reinterpret_cast<const char*>(chars(h)), length(h)};
    }

    //! generate the handle array by scanning for terminators
    std::vector<StringHandle> scan_handles() const;

    //! total number of characters including terminators
    std::size_t total_chars() const { return size_; }

private:
    std::vector<std::uint8_t> data_;
    std::size_t size_ = 0;
};

/*!
 * An ordered collection of handles into a shared buffer. Sorters only permute
 * the handles.
 */
class StringSet
{
public:
    StringSet();
    StringSet(std::shared_ptr<const CharBuffer> buffer,
              std::vector<StringHandle> handles);

    const CharBuffer& buffer() const { return *buffer_; }
    const std::shared_ptr<const CharBuffer>& shared_buffer() const {
        return buffer_;
    }

    std::vector<StringHandle>& handles() { return handles_; }
    const std::vector<StringHandle>& handles() const { return handles_; }

    std::span<StringHandle> span() { return handles_; }
    std::span<const StringHandle> span() const { return handles_; }

    std::size_t size() const { return handles_.size(); }
    bool empty() const { return handles_.empty(); }

    std::string_view operator[](std::size_t i) const {
        return buffer_->view(handles_[i]);
    }

    //! same buffer, different handle sequence
    StringSet with_handles(std::vector<StringHandle> handles) const {
        return StringSet(buffer_, std::move(handles));
    }

    //! string contents in handle order
    std::vector<std::string> strings() const;

private:
    std::shared_ptr<const CharBuffer> buffer_;
    std::vector<StringHandle> handles_;
};

//! Split raw bytes at every occurrence of delimiter. The delimiter is stored
//! as terminator 0; a trailing delimiter is appended when absent.
StringSet load_delimited(std::span<const std::uint8_t> bytes,
                         std::uint8_t delimiter);

StringSet load_delimited(std::string_view bytes, char delimiter);

//! build a set from explicit strings (test and tool convenience)
StringSet make_string_set(const std::vector<std::string>& strings);

/******************************************************************************/
// Word keys

//! Load key_width characters of s starting at depth, big-endian packed.
//! Characters following the terminator are zero. depth must not exceed the
//! terminator position.
inline key_type extract_key(const CharBuffer& buf, StringHandle s,
                            std::size_t depth) {
    key_type raw;
    std::memcpy(&raw, buf.chars(s) + depth, sizeof(raw));
    const key_type key = __builtin_bswap64(raw);
    // exact zero-byte detector: high bit set exactly in zero bytes
    constexpr key_type low7 = 0x7F7F7F7F7F7F7F7Full;
    const key_type zeros = ~(((key & low7) + low7) | key | low7);
    if (zeros == 0) return key;
    const unsigned keep = static_cast<unsigned>(__builtin_clzll(zeros)) / 8;
    return keep == 0 ? 0 : key & (~key_type(0) << (64 - 8 * keep));
}

//! number of equal leading characters of two keys (key_width if equal)
inline std::size_t key_lcp(key_type a, key_type b) {
    const key_type diff = a ^ b;
    if (diff == 0) return key_width;
    return static_cast<std::size_t>(__builtin_clzll(diff)) / 8;
}

//! character at position i (0 = most significant) of a key
inline std::uint8_t key_char(key_type key, std::size_t i) {
    return static_cast<std::uint8_t>(key >> (8 * (key_width - 1 - i)));
}

//! number of non-zero characters in a key
inline std::size_t key_depth(key_type key) {
    if (key == 0) return 0;
    return key_width - static_cast<std::size_t>(__builtin_ctzll(key)) / 8;
}

//! whether the key contains the string terminator
inline bool key_has_terminator(key_type key) {
    return (key & 0xFF) == 0;
}

/******************************************************************************/
// LCP primitives

//! sentinel for the undefined first LCP entry
inline constexpr std::size_t lcp_undefined =
    std::numeric_limits<std::size_t>::max();

inline std::size_t lcp(const CharBuffer& buf, StringHandle s, StringHandle t,
                       std::size_t depth = 0) {
    const std::uint8_t* a = buf.chars(s);
    const std::uint8_t* b = buf.chars(t);
    std::size_t h = depth;
    while (a[h] != 0 && a[h] == b[h]) ++h;
    return h;
}

//! Per-position LCP with the predecessor; values[0] is lcp_undefined.
struct LcpArray {
    std::vector<std::size_t> values;

    std::size_t size() const { return values.size(); }
    std::size_t operator[](std::size_t i) const { return values[i]; }

    //! L: sum over all entries except the first
    std::size_t sum() const;

    friend bool operator==(const LcpArray&, const LcpArray&) = default;
};

//! L of an LCP span, skipping index 0
std::size_t lcp_sum(std::span<const std::size_t> lcps);

//! thrown by oracles that require sorted input
class NotSortedError : public std::runtime_error
{
public:
    NotSortedError(std::size_t index, const std::string& what)
        : std::runtime_error(what), index_(index) { }

    //! first position i with S[i-1] > S[i]
    std::size_t index() const { return index_; }

private:
    std::size_t index_;
};

//! character-by-character LCP array of a sorted set
LcpArray lcp_array_oracle(const StringSet& sorted);

//! Sorted set with LCP array and optional distinguishing characters
//! dchar[i] = s_i[lcps[i]] (dchar[0] = s_0[0]).
struct SortedWithLcp {
    StringSet set;
    LcpArray lcps;
    std::vector<std::uint8_t> dchar;
};

/******************************************************************************/
// Verification

struct VerifyReport {
    enum class Failure { none, permutation, order };

    Failure failure = Failure::none;
    //! first offending index in the output (permutation: in offset order)
    std::size_t index = 0;
    std::string message;

    bool ok() const { return failure == Failure::none; }
    explicit operator bool() const { return ok(); }
};

//! check that output is a permutation of input and in non-descending order
VerifyReport verify(const StringSet& input, const StringSet& output);

//! check only non-descending order of a handle sequence
VerifyReport verify_order(const CharBuffer& buf,
                          std::span<const StringHandle> handles);

struct DistStats {
    std::size_t D = 0;
    std::size_t L = 0;
    double avg_len = 0.0;
};

//! Distinguishing prefix size and LCP sum of a set (sorts a copy).
//! D = sum_i min(|s_i| + 1, max(h_i, h_{i+1}) + 1), out-of-range h are 0.
DistStats dist_stats(const StringSet& set);

//! reference comparator sort of a handle sequence (std::sort on views)
void reference_sort(const CharBuffer& buf, std::span<StringHandle> handles);

} // namespace pss

#endif // !PSS_STRING_SET_HEADER

/******************************************************************************/
