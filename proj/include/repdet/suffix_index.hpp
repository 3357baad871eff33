#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <span>
#include <vector>

#include "repdet/corpus.hpp"

namespace repdet {

// Symbol alphabet of the concatenated corpus text: document bytes are
// remapped to [2, 257], a shared document separator is 1 and the terminal
// sentinel 0 closes the text. The sentinel orders below every byte, so
// suffix comparisons never run past a document artificially.
using Symbol = uint16_t;
inline constexpr Symbol kTerminal = 0;
inline constexpr Symbol kSeparator = 1;
inline constexpr int32_t kSigma = 258;

// A maximal range [lo, hi] of suffix-array positions whose suffixes share a
// prefix of exactly `depth` symbols; the suffix-array analogue of an
// internal suffix-tree node.
struct LcpInterval {
    int32_t depth = 0;
    int32_t lo = 0;
    int32_t hi = 0;  // inclusive

    friend bool operator==(const LcpInterval&, const LcpInterval&) = default;
};

// Generalized suffix array over the corpus concatenation.
//   text = doc0 SEP doc1 SEP ... SEP doc{n-1} TERM
// sa is a permutation of [0, text.size()) in lexicographic suffix order and
// lcp[i] is the common-prefix length of the suffixes at sa[i-1], sa[i]
// (lcp[0] = 0). Immutable once built; safe to share across readers.
struct CorpusIndex {
    std::vector<Symbol> text;
    std::vector<int32_t> doc_start;  // position of each document's first symbol
    std::vector<int32_t> doc_end;    // one past each document's last symbol
    std::vector<int32_t> sa;
    std::vector<int32_t> lcp;
    uint64_t content_hash = 0;  // corpus_content_hash of the source corpus

    int32_t n_documents() const { return static_cast<int32_t>(doc_start.size()); }
    int64_t text_length() const { return static_cast<int64_t>(text.size()); }

    // Ordinal of the document whose span contains `pos`, or -1 for a
    // separator/terminal position.
    int32_t doc_of(int32_t pos) const;
};

// SA-IS construction, O(n) over the integer alphabet. The final symbol of
// `text` must be a unique minimum (the terminal sentinel).
std::vector<int32_t> suffix_array(std::span<const Symbol> text);

// Kasai's algorithm, O(n).
std::vector<int32_t> lcp_array(std::span<const Symbol> text, std::span<const int32_t> sa);

CorpusIndex build_index(const Corpus& corpus);

// Bottom-up enumeration of every maximal lcp-interval with depth >= min_depth
// (each reported exactly once). `has_embedded` is true when a deeper
// lcp-interval nests inside the reported one, i.e. the interval is not flat.
void for_each_lcp_interval(std::span<const int32_t> lcp, int32_t min_depth,
                           const std::function<void(const LcpInterval&, bool has_embedded)>& visit);

std::vector<LcpInterval> lcp_intervals(const CorpusIndex& index, int32_t min_depth);

// FNV-1a over the remapped symbol text; keys the binary index cache.
uint64_t corpus_content_hash(const Corpus& corpus);

// Binary cache of (sa, lcp, boundaries) keyed by corpus_content_hash.
// Little-endian 64-bit payload with a magic header and version byte.
void save_index_cache(const CorpusIndex& index, const std::filesystem::path& path);

// Rebuilds text/boundaries from the corpus and loads sa/lcp from the cache.
// Returns false (a miss) when the file is absent, malformed, from another
// version, or keyed by a different corpus hash.
bool load_index_cache(const Corpus& corpus, const std::filesystem::path& path, CorpusIndex& out);

}  // namespace repdet
