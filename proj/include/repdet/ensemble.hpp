#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "repdet/classifier.hpp"
#include "repdet/corpus.hpp"
#include "repdet/pseudo_label.hpp"
#include "repdet/repeat_miner.hpp"

namespace repdet {

struct EnsembleConfig {
    int32_t experts = 30;  // K
    RoundConfig round;
    ClassifierConfig classifier;
    MinerConfig miner;
    uint64_t master_seed = 0;
    int32_t threads = 1;  // 0 = hardware concurrency
};

struct RankedEntry {
    std::string doc_id;
    int32_t doc = 0;  // working-corpus ordinal
    int32_t votes = 0;
    double mean_margin = 0.0;  // mean over rounds of score - 0.5
    std::optional<GoldLabel> gold;
};

// Final ranking: votes descending, then mean_margin descending, then doc id
// ascending. effective_experts counts the rounds that actually trained
// (degenerate rounds are skipped).
struct RankedList {
    std::vector<RankedEntry> entries;
    std::string tie_policy = "votes desc, mean_margin desc, doc_id asc";
    int32_t experts_requested = 0;
    int32_t effective_experts = 0;
    std::vector<std::string> notices;
};

struct RoundAudit {
    int32_t round_id = 0;
    bool degenerate = false;
    std::vector<int32_t> sampled_repeats;
    std::vector<std::string> positive_ids;
    std::vector<std::string> negative_ids;
};

struct DetectionResult {
    RankedList ranked;
    std::vector<Repeat> repeats;
    std::vector<RoundAudit> rounds;
};

// The detection loop: mine super-maximal repeats once, build and train K
// rounds, vote score > 0.5 per document per round, rank by vote totals.
// Rounds run in parallel when cfg.threads != 1; per-round derived seeds and
// round-ordered aggregation make the output identical to a serial run, and
// two runs with the same master_seed are byte-for-byte identical.
DetectionResult run_detection(const Corpus& working, const Corpus& holdout,
                              const EnsembleConfig& cfg);

// Pseudo-relevance full classification: positives are the documents of the
// top_n ranked entries, negatives an equal-count seeded draw from the gold
// human holdout. Accuracy is measured on the labeled test corpus.
struct FullClassification {
    TrainedClassifier model;
    double accuracy = 0.0;
    int64_t test_size = 0;
};
FullClassification full_classification(const Corpus& corpus, const Corpus& holdout_human,
                                       const RankedList& ranked, int32_t top_n,
                                       const ClassifierConfig& clf_cfg, const Corpus& test);

// Output writers. The CSV columns are rank,doc_id,votes,mean_margin,gold_label.
void save_ranking_csv(const RankedList& ranked, const std::filesystem::path& path);
void save_ranking_jsonl(const RankedList& ranked, const std::filesystem::path& path);
void save_round_audit(const std::vector<RoundAudit>& rounds, const std::filesystem::path& path);

}  // namespace repdet
