#include "repdet/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <unordered_set>

#include "json.hpp"
#include "repdet/errors.hpp"
#include "repdet/text.hpp"

namespace repdet {

GoldMap gold_labels(const Corpus& corpus) {
    GoldMap map;
    map.reserve(corpus.size());
    for (const auto& doc : corpus.documents)
        if (doc.gold_label) map.emplace(doc.id, *doc.gold_label);
    return map;
}

double precision_at_m(const RankedList& ranked, const GoldMap& gold, int64_t m) {
    if (m < 1 || m > static_cast<int64_t>(ranked.entries.size()))
        throw UsageError("m must lie in [1, ranking size]");
    int64_t machine = 0;
    for (int64_t i = 0; i < m; ++i) {
        const auto& entry = ranked.entries[static_cast<size_t>(i)];
        auto it = gold.find(entry.doc_id);
        if (it == gold.end())
            throw DataError("missing gold label for ranked document: " + entry.doc_id);
        if (it->second == GoldLabel::machine) ++machine;
    }
    return static_cast<double>(machine) / static_cast<double>(m);
}

BaselineResult baseline_repeat_containment(const Corpus& corpus, std::span<const Repeat> repeats,
                                           const GoldMap& gold) {
    std::unordered_set<int32_t> containing;
    for (const auto& rep : repeats) containing.insert(rep.doc_set.begin(), rep.doc_set.end());
    if (containing.empty()) throw DataError("no documents contain a repeat");

    int64_t machine = 0;
    for (int32_t d : containing) {
        const auto& doc = corpus.documents[static_cast<size_t>(d)];
        auto it = gold.find(doc.id);
        if (it == gold.end())
            throw DataError("missing gold label for document: " + doc.id);
        if (it->second == GoldLabel::machine) ++machine;
    }
    BaselineResult out;
    out.m = static_cast<int64_t>(containing.size());
    out.ratio = static_cast<double>(machine) / static_cast<double>(out.m);
    return out;
}

double diversity(std::string_view text) {
    auto tokens = split_tokens(text);
    if (tokens.empty()) return 0.0;
    std::unordered_set<std::string> distinct;
    for (auto tok : tokens) distinct.insert(ascii_lower(tok));
    return static_cast<double>(distinct.size()) / static_cast<double>(tokens.size());
}

double diversity(const Document& doc) { return diversity(doc.text); }

std::map<int64_t, int64_t> bucket_histogram(std::span<const double> values, double bucket_width) {
    if (bucket_width <= 0.0) throw UsageError("bucket_width must be > 0");
    std::map<int64_t, int64_t> hist;
    for (double v : values) ++hist[static_cast<int64_t>(std::floor(v / bucket_width))];
    return hist;
}

void save_report_json(const EvalReport& report, const std::filesystem::path& path) {
    nlohmann::ordered_json j;
    auto precision = nlohmann::ordered_json::object();
    for (const auto& [m, p] : report.precision_at) precision[std::to_string(m)] = p;
    j["precision_at"] = precision;
    if (report.has_baseline) {
        j["baseline_repeat_containment"] = {{"ratio", report.baseline.ratio},
                                            {"m", report.baseline.m}};
    }
    auto hists = nlohmann::ordered_json::object();
    for (const auto& [source, hist] : report.diversity_histograms) {
        auto h = nlohmann::ordered_json::object();
        for (const auto& [bucket, count] : hist) h[std::to_string(bucket)] = count;
        hists[source.empty() ? "(unknown)" : source] = h;
    }
    j["diversity_histograms"] = hists;
    auto means = nlohmann::ordered_json::object();
    for (const auto& [source, mean] : report.diversity_means)
        means[source.empty() ? "(unknown)" : source] = mean;
    j["diversity_means"] = means;
    j["diversity_bucket_width"] = report.diversity_bucket_width;
    j["effective_experts"] = report.effective_experts;
    j["notices"] = report.notices;

    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write report: " + path.string());
    out << j.dump(2) << '\n';
    if (!out) throw DataError("write failed: " + path.string());
}

void save_precision_curve_csv(const RankedList& ranked, const GoldMap& gold,
                              const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write curve: " + path.string());
    out << "m,precision\n";
    int64_t machine = 0;
    char buf[40];
    for (size_t i = 0; i < ranked.entries.size(); ++i) {
        auto it = gold.find(ranked.entries[i].doc_id);
        if (it == gold.end())
            throw DataError("missing gold label for ranked document: " + ranked.entries[i].doc_id);
        if (it->second == GoldLabel::machine) ++machine;
        std::snprintf(buf, sizeof buf, "%.12g",
                      static_cast<double>(machine) / static_cast<double>(i + 1));
        out << (i + 1) << ',' << buf << '\n';
    }
    if (!out) throw DataError("write failed: " + path.string());
}

}  // namespace repdet
