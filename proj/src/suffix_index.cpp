#include "repdet/suffix_index.hpp"

#include <algorithm>
#include <cstring>
#include <fstream>

#include "repdet/errors.hpp"
#include "repdet/text.hpp"

namespace repdet {

namespace {

// SA-IS (Nong, Zhang, Chan): induced sorting over an integer alphabet.
// Recursion renames LMS substrings, so the recursive levels run on int32
// symbols regardless of the input symbol width.
template <class Sym>
void sais_build(const Sym* s, int32_t* sa, int32_t n, int32_t sigma) {
    if (n == 1) {
        sa[0] = 0;
        return;
    }

    std::vector<uint8_t> stype(static_cast<size_t>(n));  // 1 = S-type suffix
    stype[n - 1] = 1;
    for (int32_t i = n - 2; i >= 0; --i)
        stype[i] = s[i] < s[i + 1] || (s[i] == s[i + 1] && stype[i + 1]);
    auto is_lms = [&](int32_t i) { return i > 0 && stype[i] && !stype[i - 1]; };

    std::vector<int32_t> bucket(static_cast<size_t>(sigma));
    auto bucket_ends = [&] {
        std::fill(bucket.begin(), bucket.end(), 0);
        for (int32_t i = 0; i < n; ++i) ++bucket[s[i]];
        for (int32_t c = 1; c < sigma; ++c) bucket[c] += bucket[c - 1];
    };
    auto bucket_starts = [&] {
        std::fill(bucket.begin(), bucket.end(), 0);
        for (int32_t i = 0; i < n; ++i) ++bucket[s[i]];
        int32_t sum = 0;
        for (int32_t c = 0; c < sigma; ++c) {
            int32_t count = bucket[c];
            bucket[c] = sum;
            sum += count;
        }
    };

    auto induce = [&] {
        bucket_starts();
        for (int32_t i = 0; i < n; ++i) {
            int32_t j = sa[i];
            if (j > 0 && !stype[j - 1]) sa[bucket[s[j - 1]]++] = j - 1;
        }
        bucket_ends();
        for (int32_t i = n - 1; i >= 0; --i) {
            int32_t j = sa[i];
            if (j > 0 && stype[j - 1]) sa[--bucket[s[j - 1]]] = j - 1;
        }
    };

    // Pass 1: drop LMS suffixes at their bucket ends and induce, which
    // leaves the LMS substrings in sorted order inside sa.
    std::fill(sa, sa + n, -1);
    bucket_ends();
    for (int32_t i = 1; i < n; ++i)
        if (is_lms(i)) sa[--bucket[s[i]]] = i;
    induce();

    // Compact the sorted LMS positions, then name each distinct LMS
    // substring; names go into the upper half of sa keyed by position/2.
    int32_t m = 0;
    for (int32_t i = 0; i < n; ++i)
        if (is_lms(sa[i])) sa[m++] = sa[i];
    std::fill(sa + m, sa + n, -1);

    int32_t names = 0;
    int32_t prev = -1;
    for (int32_t i = 0; i < m; ++i) {
        int32_t pos = sa[i];
        bool differs = prev < 0;
        if (!differs) {
            for (int32_t d = 0;; ++d) {
                if (s[prev + d] != s[pos + d] || stype[prev + d] != stype[pos + d]) {
                    differs = true;
                    break;
                }
                if (d > 0 && (is_lms(prev + d) || is_lms(pos + d))) {
                    differs = !(is_lms(prev + d) && is_lms(pos + d));
                    break;
                }
            }
        }
        if (differs) {
            ++names;
            prev = pos;
        }
        sa[m + pos / 2] = names - 1;
    }
    for (int32_t i = n - 1, j = n - 1; i >= m; --i)
        if (sa[i] >= 0) sa[j--] = sa[i];

    // Reduced problem over the LMS substring names, in text order.
    int32_t* s1 = sa + n - m;
    int32_t* sa1 = sa;
    if (names < m)
        sais_build<int32_t>(s1, sa1, m, names);
    else
        for (int32_t i = 0; i < m; ++i) sa1[s1[i]] = i;

    // Map reduced ranks back to text positions and induce the final order.
    std::vector<int32_t> lms_pos;
    lms_pos.reserve(static_cast<size_t>(m));
    for (int32_t i = 1; i < n; ++i)
        if (is_lms(i)) lms_pos.push_back(i);
    for (int32_t i = 0; i < m; ++i) sa1[i] = lms_pos[static_cast<size_t>(sa1[i])];

    std::fill(sa + m, sa + n, -1);
    bucket_ends();
    for (int32_t i = m - 1; i >= 0; --i) {
        int32_t j = sa[i];
        sa[i] = -1;
        sa[--bucket[s[j]]] = j;
    }
    induce();
}

constexpr char kCacheMagic[4] = {'R', 'D', 'I', 'X'};
constexpr uint8_t kCacheVersion = 1;

void put_u64(std::ofstream& out, uint64_t v) {
    unsigned char buf[8];
    for (int i = 0; i < 8; ++i) buf[i] = static_cast<unsigned char>(v >> (8 * i));
    out.write(reinterpret_cast<const char*>(buf), 8);
}

bool get_u64(std::ifstream& in, uint64_t& v) {
    unsigned char buf[8];
    if (!in.read(reinterpret_cast<char*>(buf), 8)) return false;
    v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<uint64_t>(buf[i]) << (8 * i);
    return true;
}

std::vector<Symbol> concatenate(const Corpus& corpus, std::vector<int32_t>& starts,
                                std::vector<int32_t>& ends) {
    if (corpus.empty()) throw DataError("cannot index an empty corpus");
    size_t total = corpus.size();  // n-1 separators + terminal
    for (const auto& doc : corpus.documents) total += doc.text.size();

    std::vector<Symbol> text;
    text.reserve(total);
    starts.clear();
    ends.clear();
    for (size_t d = 0; d < corpus.size(); ++d) {
        const auto& doc = corpus.documents[d];
        if (doc.text.empty())
            throw DataError("document '" + doc.id + "' has empty text");
        if (d > 0) text.push_back(kSeparator);
        starts.push_back(static_cast<int32_t>(text.size()));
        for (unsigned char b : doc.text) text.push_back(static_cast<Symbol>(b + 2));
        ends.push_back(static_cast<int32_t>(text.size()));
    }
    text.push_back(kTerminal);
    return text;
}

}  // namespace

std::vector<int32_t> suffix_array(std::span<const Symbol> text) {
    if (text.empty()) return {};
    std::vector<int32_t> sa(text.size());
    sais_build<Symbol>(text.data(), sa.data(), static_cast<int32_t>(text.size()), kSigma);
    return sa;
}

std::vector<int32_t> lcp_array(std::span<const Symbol> text, std::span<const int32_t> sa) {
    const auto n = static_cast<int32_t>(text.size());
    std::vector<int32_t> rank(static_cast<size_t>(n));
    for (int32_t i = 0; i < n; ++i) rank[static_cast<size_t>(sa[i])] = i;

    std::vector<int32_t> lcp(static_cast<size_t>(n), 0);
    int32_t h = 0;
    for (int32_t i = 0; i < n; ++i) {
        int32_t r = rank[static_cast<size_t>(i)];
        if (r > 0) {
            int32_t j = sa[r - 1];
            while (i + h < n && j + h < n && text[i + h] == text[j + h]) ++h;
            lcp[static_cast<size_t>(r)] = h;
            if (h > 0) --h;
        } else {
            h = 0;
        }
    }
    return lcp;
}

int32_t CorpusIndex::doc_of(int32_t pos) const {
    auto it = std::upper_bound(doc_start.begin(), doc_start.end(), pos);
    if (it == doc_start.begin()) return -1;
    auto d = static_cast<int32_t>(it - doc_start.begin()) - 1;
    return pos < doc_end[static_cast<size_t>(d)] ? d : -1;
}

CorpusIndex build_index(const Corpus& corpus) {
    CorpusIndex index;
    index.text = concatenate(corpus, index.doc_start, index.doc_end);
    index.sa = suffix_array(index.text);
    index.lcp = lcp_array(index.text, index.sa);
    index.content_hash = corpus_content_hash(corpus);
    return index;
}

void for_each_lcp_interval(std::span<const int32_t> lcp, int32_t min_depth,
                           const std::function<void(const LcpInterval&, bool)>& visit) {
    if (min_depth < 1) throw UsageError("min_depth must be >= 1");
    struct Open {
        int32_t depth;
        int32_t lb;
        bool has_embedded;
    };
    std::vector<Open> stack;
    stack.push_back({0, 0, false});

    const auto n = static_cast<int32_t>(lcp.size());
    for (int32_t i = 1; i <= n; ++i) {
        const int32_t depth = i < n ? lcp[static_cast<size_t>(i)] : 0;
        int32_t lb = i - 1;
        bool closed_child = false;
        while (stack.back().depth > depth) {
            Open top = stack.back();
            stack.pop_back();
            top.has_embedded |= closed_child;
            if (top.depth >= min_depth)
                visit({top.depth, top.lb, i - 1}, top.has_embedded);
            lb = top.lb;
            closed_child = true;
        }
        if (stack.back().depth == depth)
            stack.back().has_embedded |= closed_child;
        else  // stack.back().depth < depth, so a new interval opens at lb
            stack.push_back({depth, lb, closed_child});
    }
}

std::vector<LcpInterval> lcp_intervals(const CorpusIndex& index, int32_t min_depth) {
    std::vector<LcpInterval> out;
    for_each_lcp_interval(index.lcp, min_depth,
                          [&](const LcpInterval& iv, bool) { out.push_back(iv); });
    return out;
}

uint64_t corpus_content_hash(const Corpus& corpus) {
    uint64_t h = 0xCBF29CE484222325ULL;
    for (const auto& doc : corpus.documents) {
        h = fnv1a64(doc.text.data(), doc.text.size(), h);
        const char sep = '\x01';
        h = fnv1a64(&sep, 1, h);
    }
    uint64_t n = corpus.size();
    h = fnv1a64(&n, sizeof n, h);
    return h;
}

void save_index_cache(const CorpusIndex& index, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write index cache: " + path.string());
    out.write(kCacheMagic, 4);
    out.put(static_cast<char>(kCacheVersion));

    put_u64(out, index.content_hash);
    put_u64(out, static_cast<uint64_t>(index.text.size()));
    put_u64(out, static_cast<uint64_t>(index.doc_start.size()));
    for (int32_t v : index.sa) put_u64(out, static_cast<uint64_t>(static_cast<int64_t>(v)));
    for (int32_t v : index.lcp) put_u64(out, static_cast<uint64_t>(static_cast<int64_t>(v)));
    for (int32_t v : index.doc_start) put_u64(out, static_cast<uint64_t>(static_cast<int64_t>(v)));
    for (int32_t v : index.doc_end) put_u64(out, static_cast<uint64_t>(static_cast<int64_t>(v)));
    if (!out) throw DataError("write failed: " + path.string());
}

bool load_index_cache(const Corpus& corpus, const std::filesystem::path& path, CorpusIndex& out) {
    std::ifstream in(path, std::ios::binary);
    if (!in) return false;
    char magic[4];
    if (!in.read(magic, 4) || std::memcmp(magic, kCacheMagic, 4) != 0) return false;
    int version = in.get();
    if (version != kCacheVersion) return false;

    uint64_t stored_hash = 0, n = 0, n_docs = 0;
    if (!get_u64(in, stored_hash) || !get_u64(in, n) || !get_u64(in, n_docs)) return false;
    if (stored_hash != corpus_content_hash(corpus)) return false;

    CorpusIndex fresh;
    fresh.text = concatenate(corpus, fresh.doc_start, fresh.doc_end);
    fresh.content_hash = stored_hash;
    if (fresh.text.size() != n || fresh.doc_start.size() != n_docs) return false;

    auto read_vec = [&](std::vector<int32_t>& vec, size_t count) {
        vec.resize(count);
        for (size_t i = 0; i < count; ++i) {
            uint64_t v;
            if (!get_u64(in, v)) return false;
            vec[i] = static_cast<int32_t>(static_cast<int64_t>(v));
        }
        return true;
    };
    std::vector<int32_t> starts, ends;
    if (!read_vec(fresh.sa, n) || !read_vec(fresh.lcp, n) || !read_vec(starts, n_docs) ||
        !read_vec(ends, n_docs))
        return false;
    if (starts != fresh.doc_start || ends != fresh.doc_end) return false;
    out = std::move(fresh);
    return true;
}

}  // namespace repdet
