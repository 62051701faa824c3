/*******************************************************************************
 * src/lcp_merge.cpp
 *
 *******************************************************************************
 * Published under the Boost Software License, Version 1.0
 ******************************************************************************/

#include <pss/lcp_merge.hpp>

#include <algorithm>
#include <bit>
#include <limits>
#include <stdexcept>

namespace pss {

/******************************************************************************/
// Comparison

LcpCompareResult lcp_compare(const CharBuffer& buf, std::size_t a,
                             StringHandle sa, std::size_t ha, std::size_t b,
                             StringHandle sb, std::size_t hb,
                             SortCounters* counters) {
    if (ha == hb) {
        std::size_t h = ha;
        std::uint64_t k = 1;
        std::uint8_t ca = buf.at(sa, h), cb = buf.at(sb, h);
        while (ca != 0 && ca == cb) {
            ++h;
            ++k;
            ca = buf.at(sa, h);
            cb = buf.at(sb, h);
        }
        if (counters) {
            counters->char_comparisons += k;
            counters->buffer_accesses += k;
        }
        if (ca <= cb) return {a, ha, b, h};
        return {b, hb, a, h};
    }
    if (ha < hb) return {b, hb, a, ha};
    return {a, ha, b, hb};
}

CachedCompareResult lcp_compare_cached(const CharBuffer& buf, std::size_t a,
                                       StringHandle sa, std::size_t ha,
                                       std::uint8_t ca, std::size_t b,
                                       StringHandle sb, std::size_t hb,
                                       std::uint8_t cb,
                                       SortCounters* counters) {
    if (ha < hb) return {{b, hb, a, ha}, ca};
    if (ha > hb) return {{a, ha, b, hb}, cb};

    if (ca != cb || ca == 0) {
        if (counters) ++counters->char_comparisons;
        if (ca <= cb) return {{a, ha, b, ha}, cb};
        return {{b, hb, a, ha}, ca};
    }

    // cached characters match: continue in the buffer
    std::size_t h = ha + 1;
    std::uint64_t k = 1;
    std::uint8_t xa = buf.at(sa, h), xb = buf.at(sb, h);
    while (xa != 0 && xa == xb) {
        ++h;
        ++k;
        xa = buf.at(sa, h);
        xb = buf.at(sb, h);
    }
    if (counters) {
        counters->char_comparisons += k + 1;
        counters->buffer_accesses += k;
    }
    if (xa <= xb) return {{a, ha, b, h}, xb};
    return {{b, hb, a, h}, xa};
}

/******************************************************************************/
// Streams

LcpStream make_stream(const SortedWithLcp& s) {
    return LcpStream{s.set.handles(), s.lcps.values, s.dchar};
}

namespace {

/*!
 * Distinguishing character of a stream element at depth when it starts a
 * merge: known from dchar when its stored LCP equals depth (element 0 stores
 * s_0[0]), otherwise read from the buffer.
 */
std::uint8_t first_dchar(const CharBuffer& buf, const LcpStream& s,
                         std::size_t i, std::size_t depth,
                         SortCounters* counters) {
    if (!s.dchar.empty()) {
        if (i == 0 ? depth == 0 : s.lcps[i] == depth) return s.dchar[i];
    }
    if (counters) ++counters->buffer_accesses;
    return buf.at(s.strings[i], depth);
}

//! copy elements [i, end) of s to out at pos, the first with lcp h and dchar c
void copy_tail(const LcpStream& s, std::size_t i, std::size_t h,
               std::uint8_t c, const MergeOutput& out, std::size_t pos,
               bool cached) {
    const std::size_t n = s.size();
    if (i >= n) return;
    out.strings[pos] = s.strings[i];
    out.lcps[pos] = h;
    if (cached) out.dchar[pos] = c;
    for (std::size_t k = i + 1; k < n; ++k) {
        const std::size_t p = pos + (k - i);
        out.strings[p] = s.strings[k];
        out.lcps[p] = s.lcps[k];
        if (cached) out.dchar[p] = s.dchar[k];
    }
}

} // namespace

/******************************************************************************/
// Binary merge

void binary_lcp_merge(const CharBuffer& buf, const LcpStream& a,
                      const LcpStream& b, const MergeOutput& out,
                      std::size_t depth, bool cached, SortCounters* counters) {
    const std::size_t na = a.size(), nb = b.size();
    std::size_t ia = 0, ib = 0, j = 0;
    std::size_t ha = depth, hb = depth;
    std::uint8_t ca = 0, cb = 0;
    if (cached) {
        if (na > 0) ca = first_dchar(buf, a, 0, depth, counters);
        if (nb > 0) cb = first_dchar(buf, b, 0, depth, counters);
    }

    while (ia < na && ib < nb)
    {
        LcpCompareResult r;
        std::uint8_t loser_dchar = 0;
        if (cached) {
            const auto cr = lcp_compare_cached(buf, 0, a.strings[ia], ha, ca, 1,
                                               b.strings[ib], hb, cb, counters);
            r = cr.result;
            loser_dchar = cr.loser_dchar;
        }
        else {
            r = lcp_compare(buf, 0, a.strings[ia], ha, 1, b.strings[ib], hb,
                            counters);
        }

        if (r.winner == 0) {
            out.strings[j] = a.strings[ia];
            out.lcps[j] = ha;
            if (cached) out.dchar[j] = ca;
            hb = r.lcp;
            cb = loser_dchar;
            if (++ia < na) {
                ha = a.lcps[ia];
                if (cached) ca = a.dchar[ia];
            }
        }
        else {
            out.strings[j] = b.strings[ib];
            out.lcps[j] = hb;
            if (cached) out.dchar[j] = cb;
            ha = r.lcp;
            ca = loser_dchar;
            if (++ib < nb) {
                hb = b.lcps[ib];
                if (cached) cb = b.dchar[ib];
            }
        }
        ++j;
    }
    if (ia < na) copy_tail(a, ia, ha, ca, out, j, cached);
    if (ib < nb) copy_tail(b, ib, hb, cb, out, j, cached);
}

namespace {

void check_same_buffer(std::span<const SortedWithLcp> parts) {
    for (const auto& p : parts) {
        if (&p.set.buffer() != &parts[0].set.buffer())
            throw std::invalid_argument("merge: parts use different buffers");
    }
}

SortedWithLcp make_result(const std::shared_ptr<const CharBuffer>& buf,
                          std::size_t n, bool cached) {
    SortedWithLcp r;
    r.set = StringSet(buf, std::vector<StringHandle>(n));
    r.lcps.values.assign(n, 0);
    if (cached) r.dchar.assign(n, 0);
    return r;
}

MergeOutput output_of(SortedWithLcp& r) {
    return MergeOutput{r.set.span(), r.lcps.values, r.dchar};
}

void finish_result(SortedWithLcp& r) {
    if (r.set.empty()) return;
    r.lcps.values[0] = lcp_undefined;
    if (!r.dchar.empty()) r.dchar[0] = r.set.buffer().at(r.set.handles()[0], 0);
}

} // namespace

SortedWithLcp binary_lcp_merge(const SortedWithLcp& a, const SortedWithLcp& b,
                               SortCounters* counters) {
    const SortedWithLcp parts[2] = {a, b};
    check_same_buffer(parts);
    SortedWithLcp r =
        make_result(a.set.shared_buffer(), a.set.size() + b.set.size(), false);
    binary_lcp_merge(a.set.buffer(), make_stream(a), make_stream(b),
                     output_of(r), 0, false, counters);
    finish_result(r);
    return r;
}

SortedWithLcp binary_lcp_mergesort(StringSet set, SortCounters* counters) {
    const std::size_t n = set.size();
    const CharBuffer& buf = set.buffer();
    std::vector<StringHandle>& s = set.handles();
    std::vector<std::size_t> lcp(n, 0);
    std::vector<StringHandle> tmp(n);
    std::vector<std::size_t> tmp_lcp(n);

    auto sort = [&](auto& self, std::size_t b, std::size_t e) -> void {
        if (e - b < 2) return;
        const std::size_t m = b + (e - b) / 2;
        self(self, b, m);
        self(self, m, e);
        const LcpStream left{std::span(s).subspan(b, m - b),
                             std::span(lcp).subspan(b, m - b), {}};
        const LcpStream right{std::span(s).subspan(m, e - m),
                              std::span(lcp).subspan(m, e - m), {}};
        binary_lcp_merge(buf, left, right,
                         MergeOutput{std::span(tmp).subspan(b, e - b),
                                     std::span(tmp_lcp).subspan(b, e - b), {}},
                         0, false, counters);
        std::copy(tmp.begin() + b, tmp.begin() + e, s.begin() + b);
        std::copy(tmp_lcp.begin() + b, tmp_lcp.begin() + e, lcp.begin() + b);
    };
    sort(sort, 0, n);

    SortedWithLcp r;
    r.lcps.values = std::move(lcp);
    r.set = std::move(set);
    finish_result(r);
    return r;
}

/******************************************************************************/
// Loser tree

LoserTree::LoserTree(const CharBuffer& buf, std::span<const LcpStream> streams,
                     std::size_t depth, bool cached, SortCounters* counters,
                     std::span<const StreamRange> ranges)
    : buf_(buf), streams_(streams), depth_(depth), cached_(cached),
      counters_(counters),
      k_(std::bit_ceil(std::max<std::size_t>(1, streams.size()))) {
    const std::size_t K = streams.size();
    ranges_.resize(K);
    for (std::size_t k = 0; k < K; ++k) {
        ranges_[k] = ranges.empty() ? StreamRange{0, streams[k].size()}
                                    : ranges[k];
        remaining_ += ranges_[k].size();
    }
    cur_.resize(K);
    cache_.assign(K, 0);
    for (std::size_t k = 0; k < K; ++k) {
        cur_[k] = ranges_[k].begin;
        if (cached_ && ranges_[k].size() > 0)
            cache_[k] = first_dchar(buf_, streams_[k], cur_[k], depth_, counters_);
    }

    // play all games bottom-up, win[i] is the winner of the subtree at i
    nodes_.assign(k_, Node{0, 0});
    std::vector<Node> win(2 * k_);
    for (std::size_t k = 0; k < k_; ++k) win[k_ + k] = Node{k, depth_};
    for (std::size_t i = k_ - 1; i >= 1; --i) {
        win[i] = play(win[2 * i], win[2 * i + 1]);
        nodes_[i] = last_loser_;
    }
    winner_ = k_ == 1 ? Node{0, depth_} : win[1];
}

bool LoserTree::exhausted(std::size_t k) const {
    return k >= streams_.size() || cur_[k] >= ranges_[k].end;
}

LoserTree::Node LoserTree::play(Node a, Node b) {
    ++games_;
    if (exhausted(a.stream)) {
        last_loser_ = a;
        return b;
    }
    if (exhausted(b.stream)) {
        last_loser_ = b;
        return a;
    }
    // equal strings leave in stream order
    if (b.stream < a.stream) std::swap(a, b);
    const LcpStream& sa = streams_[a.stream];
    const LcpStream& sb = streams_[b.stream];
    LcpCompareResult r;
    if (cached_) {
        const auto cr = lcp_compare_cached(
            buf_, a.stream, sa.strings[cur_[a.stream]], a.lcp,
            cache_[a.stream], b.stream, sb.strings[cur_[b.stream]], b.lcp,
            cache_[b.stream], counters_);
        r = cr.result;
        cache_[r.loser] = cr.loser_dchar;
    }
    else {
        r = lcp_compare(buf_, a.stream, sa.strings[cur_[a.stream]], a.lcp,
                        b.stream, sb.strings[cur_[b.stream]], b.lcp, counters_);
    }
    last_loser_ = Node{r.loser, r.lcp};
    return Node{r.winner, r.winner_lcp};
}

std::size_t LoserTree::merge(const MergeOutput& out, std::size_t pos,
                             std::size_t max_count) {
    std::size_t count = 0;
    while (remaining_ > 0 && count < max_count)
    {
        const std::size_t w = winner_.stream;
        const LcpStream& s = streams_[w];
        out.strings[pos] = s.strings[cur_[w]];
        out.lcps[pos] = winner_.lcp;
        if (cached_ && !out.dchar.empty()) out.dchar[pos] = cache_[w];
        ++pos;
        ++count;
        --remaining_;

        // successor of the winner replays the games on its leaf path
        Node x{w, 0};
        if (++cur_[w] < ranges_[w].end) {
            x.lcp = s.lcps[cur_[w]];
            if (cached_) cache_[w] = s.dchar[cur_[w]];
        }
        for (std::size_t node = (k_ + w) / 2; node >= 1; node /= 2) {
            const Node g = play(x, nodes_[node]);
            nodes_[node] = last_loser_;
            x = g;
        }
        winner_ = x;
    }
    return count;
}

std::vector<StreamRange> LoserTree::remaining_ranges() const {
    std::vector<StreamRange> r(streams_.size());
    for (std::size_t k = 0; k < streams_.size(); ++k)
        r[k] = StreamRange{cur_[k], ranges_[k].end};
    return r;
}

std::optional<StringHandle> LoserTree::front(std::size_t k) const {
    if (exhausted(k)) return std::nullopt;
    return streams_[k].strings[cur_[k]];
}

/******************************************************************************/
// K-way merge

void kway_lcp_merge(const CharBuffer& buf, std::span<const LcpStream> streams,
                    const MergeOutput& out, std::size_t depth, bool cached,
                    SortCounters* counters) {
    const std::size_t K = streams.size();
    if (K == 0) return;
    if (K == 1) {
        const LcpStream& s = streams[0];
        if (s.size() == 0) return;
        const std::uint8_t c =
            cached ? first_dchar(buf, s, 0, depth, counters) : 0;
        copy_tail(s, 0, depth, c, out, 0, cached);
        return;
    }
    if (K == 2) {
        binary_lcp_merge(buf, streams[0], streams[1], out, depth, cached,
                         counters);
        return;
    }
    LoserTree tree(buf, streams, depth, cached, counters);
    tree.merge(out, 0, std::numeric_limits<std::size_t>::max());
}

SortedWithLcp kway_lcp_merge(std::span<const SortedWithLcp> parts, bool cached,
                             SortCounters* counters) {
    if (parts.empty()) return SortedWithLcp{};
    check_same_buffer(parts);
    std::vector<LcpStream> streams;
    std::size_t n = 0;
    for (const auto& p : parts) {
        if (cached && p.dchar.size() != p.set.size())
            throw std::invalid_argument("kway_lcp_merge: missing dchar");
        streams.push_back(make_stream(p));
        n += p.set.size();
    }
    SortedWithLcp r = make_result(parts[0].set.shared_buffer(), n, cached);
    kway_lcp_merge(parts[0].set.buffer(), streams, output_of(r), 0, cached,
                   counters);
    finish_result(r);
    return r;
}

/******************************************************************************/
// Merge jobs

std::size_t MergeJob::size() const {
    std::size_t n = 0;
    for (const auto& r : ranges) n += r.size();
    return n;
}

namespace {

key_type width_mask(std::size_t w) {
    return w >= key_width ? ~key_type(0) : ~(~key_type(0) >> (8 * w));
}

} // namespace

std::vector<MergeJob> split_merge_jobs(const CharBuffer& buf,
                                       std::span<const LcpStream> streams,
                                       std::span<const StreamRange> ranges,
                                       std::size_t depth, std::size_t out_begin,
                                       const SplitOptions& options,
                                       SortCounters* counters) {
    const std::size_t K = streams.size();
    std::vector<std::size_t> pos(K);
    std::size_t total = 0;
    for (std::size_t k = 0; k < K; ++k) {
        pos[k] = ranges[k].begin;
        total += ranges[k].size();
    }

    std::vector<MergeJob> jobs;
    std::vector<key_type> front(K);
    std::size_t width = std::clamp<std::size_t>(options.initial_width, 1,
                                                key_width);
    std::size_t consumed = 0, out = out_begin;
    key_type prev_block = 0;
    std::size_t prev_width = 0;
    std::uint64_t reads = 0;

    while (consumed < total)
    {
        const key_type mask = width_mask(width);
        bool any = false;
        key_type block = 0;
        for (std::size_t k = 0; k < K; ++k) {
            if (pos[k] >= ranges[k].end) continue;
            front[k] = extract_key(buf, streams[k].strings[pos[k]], depth) & mask;
            ++reads;
            if (!any || front[k] < block) block = front[k];
            any = true;
        }

        const std::size_t len = key_depth(block);
        const bool terminated = len < width;

        MergeJob job;
        job.ranges.resize(K);
        for (std::size_t k = 0; k < K; ++k) {
            job.ranges[k] = StreamRange{pos[k], pos[k]};
            if (pos[k] >= ranges[k].end || front[k] != block) continue;
            const LcpStream& s = streams[k];
            std::size_t i = pos[k] + 1;
            while (i < ranges[k].end)
            {
                const std::size_t h = s.lcps[i];
                if (h >= depth + width) {
                    ++i;
                    continue;
                }
                if (terminated && h == depth + len) {
                    // predecessor ends here, equal only if this one does too
                    bool ends;
                    if (!s.dchar.empty()) {
                        ends = s.dchar[i] == 0;
                    }
                    else {
                        ++reads;
                        ends = (extract_key(buf, s.strings[i], depth) & mask) == block;
                    }
                    if (ends) {
                        ++i;
                        continue;
                    }
                }
                break;
            }
            job.ranges[k].end = i;
            pos[k] = i;
        }
        job.depth = depth + len;
        job.out_begin = out;

        if (prev_width != 0) {
            const std::size_t mw = std::min(prev_width, width);
            const key_type a = prev_block & width_mask(mw);
            const key_type b = block & width_mask(mw);
            const std::size_t l = key_lcp(a, b);
            if (l < mw) {
                job.boundary_known = true;
                job.boundary_lcp = depth + l;
                job.boundary_dchar = key_char(b, l);
            }
        }

        const std::size_t size = job.size();
        out += size;
        consumed += size;
        jobs.push_back(std::move(job));
        prev_block = block;
        prev_width = width;

        const double fraction =
            static_cast<double>(consumed) / static_cast<double>(total);
        if (width > 1 && static_cast<double>(jobs.size()) >
                             fraction * 2.0 *
                                 static_cast<double>(options.target_jobs))
            width /= 2;
    }

    if (counters) counters->buffer_accesses += reads;
    return jobs;
}

std::vector<MergeJob> split_merge_jobs(const CharBuffer& buf,
                                       std::span<const LcpStream> streams,
                                       std::size_t depth,
                                       const SplitOptions& options,
                                       SortCounters* counters) {
    std::vector<StreamRange> ranges(streams.size());
    for (std::size_t k = 0; k < streams.size(); ++k)
        ranges[k] = StreamRange{0, streams[k].size()};
    return split_merge_jobs(buf, streams, ranges, depth, 0, options, counters);
}

void run_merge_job(const CharBuffer& buf, std::span<const LcpStream> streams,
                   const MergeJob& job, const MergeOutput& out, bool cached,
                   SortCounters* counters) {
    std::size_t nonempty = 0, last = 0;
    for (std::size_t k = 0; k < job.ranges.size(); ++k) {
        if (job.ranges[k].size() > 0) {
            ++nonempty;
            last = k;
        }
    }
    if (nonempty == 0) return;

    if (nonempty == 1) {
        const LcpStream& s = streams[last];
        const StreamRange r = job.ranges[last];
        const LcpStream part{s.strings.subspan(r.begin, r.size()),
                             s.lcps.subspan(r.begin, r.size()),
                             s.dchar.empty()
                                 ? s.dchar
                                 : s.dchar.subspan(r.begin, r.size())};
        // first character is overwritten by the boundary below or fixed later
        const MergeOutput dst{
            out.strings.subspan(job.out_begin, r.size()),
            out.lcps.subspan(job.out_begin, r.size()),
            out.dchar.empty() ? out.dchar
                              : out.dchar.subspan(job.out_begin, r.size())};
        copy_tail(part, 0, job.depth, 0, dst, 0, cached && !out.dchar.empty());
    }
    else {
        LoserTree tree(buf, streams, job.depth, cached, counters, job.ranges);
        tree.merge(out, job.out_begin, std::numeric_limits<std::size_t>::max());
    }

    if (job.boundary_known) {
        out.lcps[job.out_begin] = job.boundary_lcp;
        if (!out.dchar.empty()) out.dchar[job.out_begin] = job.boundary_dchar;
    }
}

void fix_boundary_lcp(const CharBuffer& buf, const MergeOutput& out,
                      std::size_t pos, std::size_t from,
                      SortCounters* counters) {
    const StringHandle a = out.strings[pos - 1], b = out.strings[pos];
    std::size_t h = from;
    std::uint64_t k = 1;
    while (buf.at(a, h) != 0 && buf.at(a, h) == buf.at(b, h)) {
        ++h;
        ++k;
    }
    if (counters) counters->buffer_accesses += k;
    out.lcps[pos] = h;
    if (!out.dchar.empty()) out.dchar[pos] = buf.at(b, h);
}

} // namespace pss

/******************************************************************************/
