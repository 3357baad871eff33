#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "repdet/suffix_index.hpp"

namespace repdet {

struct RepeatOccurrence {
    int32_t position = 0;  // offset in the concatenated index text
    int32_t doc = 0;       // owning document ordinal

    friend bool operator==(const RepeatOccurrence&, const RepeatOccurrence&) = default;
};

// A super-maximal repeat: a repeated substring of the collection contained
// in no other repeated substring. Always separator-free, so every occurrence
// lies inside a single document span.
struct Repeat {
    std::string substring;  // document bytes
    int64_t length_chars = 0;
    std::vector<RepeatOccurrence> occurrences;  // sorted by position
    std::vector<int32_t> doc_set;               // sorted, deduplicated
};

struct MinerConfig {
    int64_t min_len = 20;  // characters, not bytes
    int32_t min_occ = 3;
};

// Enumerates every super-maximal repeat meeting the thresholds. Over the lcp
// structure: intervals with no deeper embedded interval (no right extension
// is repeated) whose preceding symbols are pairwise distinct (no left
// extension is repeated); occurrences whose matched prefix crosses a
// document separator are discarded, and intervals falling under min_occ
// after the discard are dropped. Results are in lexicographic substring
// order.
std::vector<Repeat> mine_supermaximal(const CorpusIndex& index, const MinerConfig& cfg);

// Union of doc_set over the selected repeats, sorted.
std::vector<int32_t> docs_containing(std::span<const Repeat> repeats,
                                     std::span<const int32_t> subset);

// Fixed-width histogram of repeat character lengths, keyed by bucket start.
std::map<int64_t, int64_t> repeat_length_histogram(std::span<const Repeat> repeats,
                                                   int64_t bucket_width);

// JSONL dump: substring (lossily escaped when not valid UTF-8),
// length_chars, n_occurrences, doc_ids.
void save_repeats(std::span<const Repeat> repeats, const Corpus& corpus,
                  const std::filesystem::path& path);

}  // namespace repdet
