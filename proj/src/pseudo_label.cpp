#include "repdet/pseudo_label.hpp"

#include <algorithm>

#include "repdet/errors.hpp"
#include "repdet/rng.hpp"

namespace repdet {

const char* to_string(LabelMode mode) {
    return mode == LabelMode::unsupervised ? "unsupervised" : "semi";
}

LabelMode parse_label_mode(std::string_view name) {
    if (name == "unsupervised") return LabelMode::unsupervised;
    if (name == "semi" || name == "semi_supervised") return LabelMode::semi_supervised;
    throw UsageError("unknown mode: " + std::string(name));
}

DetectionRound build_round(const std::vector<Repeat>& repeats, const Corpus& corpus,
                           const Corpus& holdout, const RoundConfig& cfg, int32_t k) {
    if (cfg.repeats_per_round < 1) throw UsageError("repeats_per_round must be >= 1");
    if (repeats.empty()) throw DataError("no repeats to sample from");
    if (cfg.mode == LabelMode::semi_supervised && holdout.empty())
        throw DataError("semi-supervised mode requires a non-empty human holdout");

    DetectionRound round;
    round.round_id = k;
    Rng rng(derive_seed(cfg.seed, 2 * static_cast<uint64_t>(k)));

    const auto available = static_cast<int32_t>(repeats.size());
    int32_t want = cfg.repeats_per_round;
    if (available < want) {
        round.warnings.push_back("only " + std::to_string(available) + " repeats available, sampling all");
        want = available;
    }
    round.sampled_repeats = sample_without_replacement(available, want, rng);
    std::sort(round.sampled_repeats.begin(), round.sampled_repeats.end());

    round.positives = docs_containing(repeats, round.sampled_repeats);
    if (round.positives.empty()) {
        round.degenerate = true;
        round.warnings.push_back("round produced no pseudo-positive documents");
        return round;
    }

    std::vector<int32_t> pool;
    if (cfg.mode == LabelMode::unsupervised) {
        std::vector<uint8_t> is_positive(corpus.size(), 0);
        for (int32_t d : round.positives) is_positive[static_cast<size_t>(d)] = 1;
        pool.reserve(corpus.size() - round.positives.size());
        for (int32_t d = 0; d < static_cast<int32_t>(corpus.size()); ++d)
            if (!is_positive[static_cast<size_t>(d)]) pool.push_back(d);
    } else {
        pool.resize(holdout.size());
        for (int32_t d = 0; d < static_cast<int32_t>(holdout.size()); ++d)
            pool[static_cast<size_t>(d)] = d;
    }

    const auto need = static_cast<int32_t>(round.positives.size());
    if (static_cast<int32_t>(pool.size()) < need)
        throw DataError("negative pool (" + std::to_string(pool.size()) +
                        ") smaller than positives (" + std::to_string(need) + ")");
    auto picks = sample_without_replacement(static_cast<int32_t>(pool.size()), need, rng);
    round.negatives.reserve(picks.size());
    for (int32_t p : picks) round.negatives.push_back(pool[static_cast<size_t>(p)]);
    std::sort(round.negatives.begin(), round.negatives.end());
    return round;
}

}  // namespace repdet
