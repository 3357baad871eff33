#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "repdet/corpus.hpp"
#include "repdet/ensemble.hpp"
#include "repdet/repeat_miner.hpp"

namespace repdet {

using GoldMap = std::unordered_map<std::string, GoldLabel>;

GoldMap gold_labels(const Corpus& corpus);  // documents with a gold label

// Fraction of machine-labeled documents among the first m ranked entries.
// Every inspected entry must have a gold label.
double precision_at_m(const RankedList& ranked, const GoldMap& gold, int64_t m);

// The no-classifier baseline: label every repeat-containing document as
// machine. m is the number of documents containing at least one repeat,
// ratio the machine fraction among them.
struct BaselineResult {
    double ratio = 0.0;
    int64_t m = 0;
};
BaselineResult baseline_repeat_containment(const Corpus& corpus, std::span<const Repeat> repeats,
                                           const GoldMap& gold);

// Distinct word tokens / total tokens, on lowercase whitespace tokens.
// 0 for an empty token stream.
double diversity(const Document& doc);
double diversity(std::string_view text);

// Fixed-width histogram of a [0,1] statistic, keyed by bucket ordinal.
std::map<int64_t, int64_t> bucket_histogram(std::span<const double> values, double bucket_width);

struct EvalReport {
    std::map<int64_t, double> precision_at;            // m -> precision
    bool has_baseline = false;
    BaselineResult baseline;
    std::map<std::string, std::map<int64_t, int64_t>> diversity_histograms;  // per source
    std::map<std::string, double> diversity_means;
    double diversity_bucket_width = 0.02;
    int32_t effective_experts = 0;
    std::vector<std::string> notices;
};

void save_report_json(const EvalReport& report, const std::filesystem::path& path);

// Full precision curve, one "m,precision" row per rank.
void save_precision_curve_csv(const RankedList& ranked, const GoldMap& gold,
                              const std::filesystem::path& path);

}  // namespace repdet
