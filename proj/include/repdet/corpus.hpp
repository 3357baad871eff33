#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace repdet {

enum class GoldLabel { human, machine };

const char* to_string(GoldLabel label);
std::optional<GoldLabel> parse_gold_label(std::string_view s);

// One text unit. `text` is a byte string; UTF-8 expected, arbitrary bytes
// tolerated. `source` is free-form provenance (e.g. decoding strategy tag).
struct Document {
    std::string id;
    std::string text;
    std::optional<GoldLabel> gold_label;
    std::string source;
};

struct Corpus {
    std::vector<Document> documents;
    std::string provenance;

    size_t size() const { return documents.size(); }
    bool empty() const { return documents.empty(); }
};

struct SplitConfig {
    double human_holdout_fraction = 0.05;
    uint64_t min_chars = 300;   // documents with fewer characters are dropped
    uint64_t trim_chars = 300;  // texts are cut to this many characters; 0 disables
    uint64_t seed = 0;
};

enum class CorpusFormat { jsonl, plaintext_dir };

struct SkippedRecord {
    size_t line = 0;  // 1-based line (jsonl) or 0 (plaintext)
    std::string what;
    std::string reason;
};

struct LoadResult {
    Corpus corpus;
    std::vector<SkippedRecord> skipped;
};

// Reads a corpus from disk. jsonl: one object per line with keys `id`,
// `text`, optional `label` ("human"|"machine"), optional `source`; records
// missing `id` get the 1-based record counter as id. plaintext_dir: every
// *.txt file in the directory, filename stem as id, files in sorted order.
// Malformed records are skipped and reported, not fatal.
LoadResult load_corpus(const std::filesystem::path& path, CorpusFormat format);

// Writes the jsonl form with a fixed field order (id, text, label, source)
// so saved corpora diff cleanly. load(save(c)) is byte-identical in ids/texts.
void save_corpus(const Corpus& corpus, const std::filesystem::path& path);

// Drops documents shorter than cfg.min_chars characters and trims the rest
// to cfg.trim_chars characters, never splitting a multi-byte sequence.
Corpus filter_and_trim(const Corpus& corpus, const SplitConfig& cfg);

struct SplitResult {
    Corpus working;
    Corpus holdout;
};

// Moves floor(fraction * #human) gold-human documents into the holdout,
// chosen by seeded uniform sampling without replacement. Both halves keep
// the input document order.
SplitResult split_human_holdout(const Corpus& corpus, const SplitConfig& cfg);

}  // namespace repdet
