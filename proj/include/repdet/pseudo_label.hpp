#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "repdet/corpus.hpp"
#include "repdet/repeat_miner.hpp"

namespace repdet {

enum class LabelMode { unsupervised, semi_supervised };

const char* to_string(LabelMode mode);
LabelMode parse_label_mode(std::string_view name);

struct RoundConfig {
    int32_t repeats_per_round = 20;
    LabelMode mode = LabelMode::unsupervised;
    uint64_t seed = 0;
};

// One self-training round: a seeded sample of repeats, the documents that
// contain them as pseudo-positives, and an equal-size negative draw.
// `negatives` index the working corpus in unsupervised mode and the human
// holdout in semi-supervised mode.
struct DetectionRound {
    int32_t round_id = 0;
    std::vector<int32_t> sampled_repeats;  // sorted repeat indices
    std::vector<int32_t> positives;        // sorted working-corpus ordinals
    std::vector<int32_t> negatives;        // sorted ordinals into the negative pool
    bool degenerate = false;               // empty positives; round is skipped
    std::vector<std::string> warnings;
};

// Builds round k. The sampling seed is derived from (cfg.seed, k), so rounds
// are independent and any (seed, k) pair reproduces exactly. Repeats are
// sampled without replacement within the round; fewer available repeats than
// repeats_per_round samples them all with a warning. Unsupervised negatives
// are drawn from the working corpus minus the round's positives;
// semi-supervised negatives from the holdout. A negative pool smaller than
// the positive set is an error (no replacement draws).
DetectionRound build_round(const std::vector<Repeat>& repeats, const Corpus& corpus,
                           const Corpus& holdout, const RoundConfig& cfg, int32_t k);

}  // namespace repdet
