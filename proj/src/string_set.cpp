/*******************************************************************************
 * src/string_set.cpp
 *
 * String set loading, brute-force LCP oracle, verification and distinguishing
 * prefix statistics.
 *
 *******************************************************************************
 * Published under the Boost Software License, Version 1.0
 ******************************************************************************/

#include <pss/string_set.hpp>

#include <algorithm>
#include <numeric>
#include <sstream>

namespace pss {

CharBuffer::CharBuffer()
    : data_(key_width, 0), size_(0) { }

CharBuffer::CharBuffer(std::vector<std::uint8_t> bytes)
    : data_(std::move(bytes)) {
    if (!data_.empty() && data_.back() != 0)
        data_.push_back(0);
    size_ = data_.size();
    data_.resize(size_ + key_width, 0);
}

std::vector<StringHandle> CharBuffer::scan_handles() const {
    std::vector<StringHandle> out;
    std::size_t start = 0;
    for (std::size_t i = 0; i < size_; ++i) {
        if (data_[i] == 0) {
            out.push_back(StringHandle{start});
            start = i + 1;
        }
    }
    return out;
}

StringSet::StringSet()
    : buffer_(std::make_shared<const CharBuffer>()) { }

StringSet::StringSet(std::shared_ptr<const CharBuffer> buffer,
                     std::vector<StringHandle> handles)
    : buffer_(std::move(buffer)), handles_(std::move(handles)) {
    if (!buffer_)
        throw std::invalid_argument("StringSet: null buffer");
}

std::vector<std::string> StringSet::strings() const {
    std::vector<std::string> out;
    out.reserve(handles_.size());
    for (StringHandle h : handles_)
        out.emplace_back(buffer_->view(h));
    return out;
}

StringSet load_delimited(std::span<const std::uint8_t> bytes,
                         std::uint8_t delimiter) {
    std::vector<std::uint8_t> data(bytes.begin(), bytes.end());
    if (delimiter != 0) {
        if (std::find(data.begin(), data.end(), 0) != data.end())
            throw std::invalid_argument(
                "load_delimited: input contains a zero byte but the "
                "delimiter is not zero");
        std::replace(data.begin(), data.end(), delimiter, std::uint8_t(0));
    }
    auto buf = std::make_shared<const CharBuffer>(std::move(data));
    auto handles = buf->scan_handles();
    return StringSet(std::move(buf), std::move(handles));
}

StringSet load_delimited(std::string_view bytes, char delimiter) {
    return load_delimited(
        std::span<const std::uint8_t>(
            reinterpret_cast<const std::uint8_t*>(bytes.data()), bytes.size()),
        static_cast<std::uint8_t>(delimiter));
}

StringSet make_string_set(const std::vector<std::string>& strings) {
    std::vector<std::uint8_t> data;
    for (const std::string& s : strings) {
        if (s.find('\0') != std::string::npos)
            throw std::invalid_argument("make_string_set: embedded zero");
        data.insert(data.end(), s.begin(), s.end());
        data.push_back(0);
    }
    auto buf = std::make_shared<const CharBuffer>(std::move(data));
    auto handles = buf->scan_handles();
    return StringSet(std::move(buf), std::move(handles));
}

std::size_t LcpArray::sum() const {
    return lcp_sum(values);
}

std::size_t lcp_sum(std::span<const std::size_t> lcps) {
    if (lcps.size() < 2) return 0;
    return std::accumulate(lcps.begin() + 1, lcps.end(), std::size_t(0));
}

LcpArray lcp_array_oracle(const StringSet& sorted) {
    const CharBuffer& buf = sorted.buffer();
    const auto& hs = sorted.handles();
    LcpArray out;
    out.values.resize(hs.size());
    if (hs.empty()) return out;
    out.values[0] = lcp_undefined;
    for (std::size_t i = 1; i < hs.size(); ++i) {
        const std::uint8_t* a = buf.chars(hs[i - 1]);
        const std::uint8_t* b = buf.chars(hs[i]);
        std::size_t h = 0;
        while (a[h] != 0 && a[h] == b[h]) ++h;
        if (a[h] > b[h]) {
            std::ostringstream oss;
            oss << "lcp_array_oracle: input not sorted at index " << i;
            throw NotSortedError(i, oss.str());
        }
        out.values[i] = h;
    }
    return out;
}

VerifyReport verify_order(const CharBuffer& buf,
                          std::span<const StringHandle> handles) {
    VerifyReport r;
    for (std::size_t i = 1; i < handles.size(); ++i) {
        if (buf.view(handles[i - 1]) > buf.view(handles[i])) {
            r.failure = VerifyReport::Failure::order;
            r.index = i;
            std::ostringstream oss;
            oss << "order violation at index " << i;
            r.message = oss.str();
            return r;
        }
    }
    return r;
}

VerifyReport verify(const StringSet& input, const StringSet& output) {
    VerifyReport r;
    if (&input.buffer() != &output.buffer()) {
        r.failure = VerifyReport::Failure::permutation;
        r.message = "output refers to a different character buffer";
        return r;
    }

    std::vector<StringHandle> a = input.handles(), b = output.handles();
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    const std::size_t common = std::min(a.size(), b.size());
    std::size_t i = 0;
    while (i < common && a[i] == b[i]) ++i;
    if (i < common || a.size() != b.size()) {
        r.failure = VerifyReport::Failure::permutation;
        r.index = i;
        std::ostringstream oss;
        oss << "not a permutation: handle multisets differ at sorted index "
            << i << " (input " << a.size() << " handles, output "
            << b.size() << ")";
        r.message = oss.str();
        return r;
    }

    return verify_order(output.buffer(), output.handles());
}

void reference_sort(const CharBuffer& buf, std::span<StringHandle> handles) {
    std::sort(handles.begin(), handles.end(),
              [&buf](StringHandle a, StringHandle b) {
                  return buf.view(a) < buf.view(b);
              });
}

DistStats dist_stats(const StringSet& set) {
    DistStats st;
    const std::size_t n = set.size();
    if (n == 0) return st;

    StringSet sorted = set;
    reference_sort(sorted.buffer(), sorted.span());
    const LcpArray h = lcp_array_oracle(sorted);
    st.L = h.sum();

    std::size_t total_len = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t len = sorted.buffer().length(sorted.handles()[i]);
        total_len += len;
        const std::size_t left = i == 0 ? 0 : h[i];
        const std::size_t right = i + 1 < n ? h[i + 1] : 0;
        st.D += std::min(len + 1, std::max(left, right) + 1);
    }
    st.avg_len = static_cast<double>(total_len) / static_cast<double>(n);
    return st;
}

} // namespace pss

/******************************************************************************/
