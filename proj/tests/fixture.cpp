#include "fixture.hpp"

#include <cmath>
#include <vector>

#include "repdet/rng.hpp"

namespace repdet::fixture {

namespace {

// Three-letter words keep tokens short: a 20-character repeat then needs
// about five consecutive token collisions, which full-support sampling
// rarely produces but restricted-support decoding produces readily.
std::string make_word(int32_t id) {
    std::string word(3, 'a');
    word[2] = static_cast<char>('a' + id % 26);
    word[1] = static_cast<char>('a' + (id / 26) % 26);
    word[0] = static_cast<char>('a' + (id / 676) % 26);
    return word;
}

}  // namespace

std::string make_training_text(uint64_t seed, const TrainingTextConfig& cfg) {
    std::vector<std::string> vocab(static_cast<size_t>(cfg.vocab));
    for (int32_t i = 0; i < cfg.vocab; ++i) vocab[static_cast<size_t>(i)] = make_word(i);

    // Fixed transition structure per word: `successors` distinct targets with
    // Zipf-like weights; structure depends on the seed only through the rng.
    Rng structure(derive_seed(seed, 0x5452414EULL));
    std::vector<std::vector<int32_t>> targets(static_cast<size_t>(cfg.vocab));
    std::vector<std::vector<double>> cumweights(static_cast<size_t>(cfg.vocab));
    for (int32_t w = 0; w < cfg.vocab; ++w) {
        auto picks = sample_without_replacement(cfg.vocab, cfg.successors, structure);
        targets[static_cast<size_t>(w)] = picks;
        double total = 0.0;
        std::vector<double> cum;
        cum.reserve(picks.size());
        for (size_t r = 0; r < picks.size(); ++r) {
            total += 1.0 / std::pow(static_cast<double>(r + 1), cfg.skew);
            cum.push_back(total);
        }
        for (double& c : cum) c /= total;
        cumweights[static_cast<size_t>(w)] = std::move(cum);
    }

    Rng walk(derive_seed(seed, 0x57414C4BULL));
    auto current = static_cast<int32_t>(walk.below(static_cast<uint64_t>(cfg.vocab)));
    std::string text;
    text.reserve(static_cast<size_t>(cfg.n_tokens) * 7);
    for (int32_t t = 0; t < cfg.n_tokens; ++t) {
        if (t > 0) text.push_back(' ');
        text += vocab[static_cast<size_t>(current)];
        const auto& cum = cumweights[static_cast<size_t>(current)];
        double u = walk.unit();
        size_t pick = cum.size() - 1;
        for (size_t r = 0; r < cum.size(); ++r)
            if (u < cum[r]) {
                pick = r;
                break;
            }
        current = targets[static_cast<size_t>(current)][pick];
    }
    return text;
}

Corpus make_strategy_corpus(const std::string& training_text, const DecodingStrategy& strategy,
                            const SynthConfig& cfg, uint64_t seed) {
    auto model = fit_markov(training_text, cfg.order, cfg.alpha);
    auto prompts = sample_prompts(training_text, cfg.order, cfg.n_docs, seed);
    return generate_corpus(model, strategy, cfg.n_docs, cfg.doc_len_tokens, prompts, seed);
}

Mixture make_mixture(uint64_t seed, const SynthConfig& cfg) {
    Mixture mix;
    mix.training_text = make_training_text(seed);

    DecodingStrategy topk;
    topk.kind = DecodingKind::topk;
    topk.k = 10;
    auto machine = make_strategy_corpus(mix.training_text, topk, cfg, derive_seed(seed, 1));

    DecodingStrategy ancestral;
    ancestral.kind = DecodingKind::ancestral;
    auto human = make_strategy_corpus(mix.training_text, ancestral, cfg, derive_seed(seed, 2));
    for (auto& doc : human.documents) doc.gold_label = GoldLabel::human;

    mix.combined = std::move(machine);
    mix.combined.provenance = "synthetic-mixture";
    mix.combined.documents.insert(mix.combined.documents.end(),
                                  std::make_move_iterator(human.documents.begin()),
                                  std::make_move_iterator(human.documents.end()));
    return mix;
}

}  // namespace repdet::fixture
