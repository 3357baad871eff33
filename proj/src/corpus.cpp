#include "repdet/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <unordered_set>

#include "json.hpp"
#include "repdet/errors.hpp"
#include "repdet/rng.hpp"
#include "repdet/text.hpp"

namespace repdet {

using json = nlohmann::json;
namespace fs = std::filesystem;

const char* to_string(GoldLabel label) {
    return label == GoldLabel::human ? "human" : "machine";
}

std::optional<GoldLabel> parse_gold_label(std::string_view s) {
    if (s == "human") return GoldLabel::human;
    if (s == "machine") return GoldLabel::machine;
    return std::nullopt;
}

namespace {

LoadResult load_jsonl(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open corpus file: " + path.string());

    LoadResult result;
    result.corpus.provenance = path.string();
    std::unordered_set<std::string> seen_ids;
    std::string line;
    size_t line_no = 0;
    size_t record_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        ++record_no;
        json rec = json::parse(line, nullptr, false);
        if (rec.is_discarded() || !rec.is_object()) {
            result.skipped.push_back({line_no, line.substr(0, 40), "not a JSON object"});
            continue;
        }
        if (!rec.contains("text") || !rec["text"].is_string()) {
            result.skipped.push_back({line_no, line.substr(0, 40), "missing string field 'text'"});
            continue;
        }
        Document doc;
        doc.text = rec["text"].get<std::string>();
        if (doc.text.empty()) {
            result.skipped.push_back({line_no, line.substr(0, 40), "empty text"});
            continue;
        }
        if (rec.contains("id") && rec["id"].is_string())
            doc.id = rec["id"].get<std::string>();
        else
            doc.id = std::to_string(record_no);
        if (rec.contains("label") && rec["label"].is_string()) {
            auto label = parse_gold_label(rec["label"].get<std::string>());
            if (!label) {
                result.skipped.push_back({line_no, line.substr(0, 40), "unknown label"});
                continue;
            }
            doc.gold_label = label;
        }
        if (rec.contains("source") && rec["source"].is_string())
            doc.source = rec["source"].get<std::string>();
        if (!seen_ids.insert(doc.id).second) {
            result.skipped.push_back({line_no, doc.id, "duplicate id"});
            continue;
        }
        result.corpus.documents.push_back(std::move(doc));
    }
    return result;
}

LoadResult load_plaintext_dir(const fs::path& path) {
    if (!fs::is_directory(path)) throw DataError("not a directory: " + path.string());

    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(path))
        if (entry.is_regular_file() && entry.path().extension() == ".txt")
            files.push_back(entry.path());
    std::sort(files.begin(), files.end());

    LoadResult result;
    result.corpus.provenance = path.string();
    std::unordered_set<std::string> seen_ids;
    for (const auto& file : files) {
        std::ifstream in(file, std::ios::binary);
        if (!in) {
            result.skipped.push_back({0, file.string(), "unreadable file"});
            continue;
        }
        Document doc;
        doc.id = file.stem().string();
        doc.text.assign(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
        if (doc.text.empty()) {
            result.skipped.push_back({0, file.string(), "empty text"});
            continue;
        }
        if (!seen_ids.insert(doc.id).second) {
            result.skipped.push_back({0, doc.id, "duplicate id"});
            continue;
        }
        result.corpus.documents.push_back(std::move(doc));
    }
    return result;
}

}  // namespace

LoadResult load_corpus(const fs::path& path, CorpusFormat format) {
    if (format == CorpusFormat::jsonl) return load_jsonl(path);
    return load_plaintext_dir(path);
}

void save_corpus(const Corpus& corpus, const fs::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write corpus file: " + path.string());
    for (const auto& doc : corpus.documents) {
        nlohmann::ordered_json rec;
        rec["id"] = doc.id;
        rec["text"] = doc.text;
        if (doc.gold_label) rec["label"] = to_string(*doc.gold_label);
        if (!doc.source.empty()) rec["source"] = doc.source;
        out << rec.dump(-1, ' ', false, json::error_handler_t::replace) << '\n';
    }
    if (!out) throw DataError("write failed: " + path.string());
}

Corpus filter_and_trim(const Corpus& corpus, const SplitConfig& cfg) {
    if (cfg.trim_chars > 0 && cfg.min_chars > cfg.trim_chars)
        throw UsageError("min_chars exceeds trim_chars");
    Corpus out;
    out.provenance = corpus.provenance;
    for (const auto& doc : corpus.documents) {
        size_t chars = utf8_length(doc.text);
        if (chars < cfg.min_chars) continue;
        Document kept = doc;
        if (cfg.trim_chars > 0 && chars > cfg.trim_chars)
            kept.text = std::string(utf8_prefix(doc.text, cfg.trim_chars));
        out.documents.push_back(std::move(kept));
    }
    return out;
}

SplitResult split_human_holdout(const Corpus& corpus, const SplitConfig& cfg) {
    if (cfg.human_holdout_fraction < 0.0 || cfg.human_holdout_fraction > 1.0)
        throw UsageError("human_holdout_fraction must lie in [0,1]");

    std::vector<int32_t> human_indices;
    for (size_t i = 0; i < corpus.documents.size(); ++i)
        if (corpus.documents[i].gold_label == GoldLabel::human)
            human_indices.push_back(static_cast<int32_t>(i));

    SplitResult result;
    result.working.provenance = corpus.provenance;
    result.holdout.provenance = corpus.provenance;

    if (cfg.human_holdout_fraction == 0.0) {
        result.working = corpus;
        return result;
    }
    if (human_indices.empty())
        throw DataError("holdout fraction > 0 but corpus has no human-labeled documents");

    // floor(fraction * n); the epsilon absorbs representation error in
    // fractions like 0.29 that would otherwise round an exact product down.
    auto n_holdout = static_cast<int32_t>(std::floor(
        cfg.human_holdout_fraction * static_cast<double>(human_indices.size()) + 1e-9));
    n_holdout = std::min<int32_t>(n_holdout, static_cast<int32_t>(human_indices.size()));
    Rng rng(cfg.seed);
    auto picks = sample_without_replacement(
        static_cast<int32_t>(human_indices.size()), n_holdout, rng);
    std::vector<bool> in_holdout(corpus.documents.size(), false);
    for (int32_t p : picks) in_holdout[static_cast<size_t>(human_indices[static_cast<size_t>(p)])] = true;

    for (size_t i = 0; i < corpus.documents.size(); ++i) {
        if (in_holdout[i])
            result.holdout.documents.push_back(corpus.documents[i]);
        else
            result.working.documents.push_back(corpus.documents[i]);
    }
    return result;
}

}  // namespace repdet
