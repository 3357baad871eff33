#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "repdet/corpus.hpp"

namespace repdet {

enum class DecodingKind { greedy, ancestral, topk, nucleus };

const char* to_string(DecodingKind kind);
DecodingKind parse_decoding_kind(std::string_view name);

struct DecodingStrategy {
    DecodingKind kind = DecodingKind::ancestral;
    int32_t k = 10;   // topk only
    double p = 0.8;   // nucleus only
};

// Restricts the support of a probability-sorted next-token distribution.
//   topk:     keep the k most probable entries, renormalize by their mass
//   nucleus:  keep the maximal prefix whose cumulative mass is <= p
//             (boundary inclusive, at least one entry), renormalize
//   greedy:   all mass on the first entry
//   ancestral: identity
// `dist` must be sorted descending and sum to 1 within 1e-9.
std::vector<double> renormalize(const std::vector<double>& dist, const DecodingStrategy& strategy);

// Word-token Markov model: conditional counts of the next token given the
// previous `order` tokens, with optional add-alpha smoothing over the whole
// vocabulary. Unseen contexts fall back to the unigram distribution.
class MarkovModel {
public:
    MarkovModel() = default;

    int32_t order() const { return order_; }
    double smoothing() const { return smoothing_; }
    int32_t vocab_size() const { return static_cast<int32_t>(vocab_.size()); }
    const std::string& token(int32_t id) const { return vocab_[static_cast<size_t>(id)]; }
    int32_t token_id(std::string_view tok) const;  // -1 when unknown

    // Next-token distribution for a context of token ids, as (token id,
    // probability) sorted by probability descending, ties by token id
    // ascending. Contexts shorter than `order` or containing unknown ids use
    // the unigram fallback. The model is immutable after fitting, so this is
    // safe to call from concurrent readers.
    struct Dist {
        std::vector<int32_t> tokens;
        std::vector<double> probs;  // sorted descending, sums to 1
    };
    Dist next_distribution(const std::vector<int32_t>& context) const;

    friend MarkovModel fit_markov(std::string_view training_text, int32_t order, double smoothing);

private:
    struct ContextEntry {
        std::vector<std::pair<int32_t, int64_t>> counts;  // (token, count) sorted desc
        int64_t total = 0;
    };

    Dist build_dist(const ContextEntry& entry) const;

    int32_t order_ = 1;
    double smoothing_ = 0.0;
    std::vector<std::string> vocab_;
    std::unordered_map<std::string, int32_t> vocab_index_;
    std::unordered_map<std::string, ContextEntry> table_;  // key: packed context ids
    ContextEntry unigram_;
};

// Tallies sliding-window counts over the whitespace tokens of the training
// text. order 0 yields the unigram model.
MarkovModel fit_markov(std::string_view training_text, int32_t order, double smoothing);

// Auto-regressive generation: each document continues its prompt (tokens,
// not emitted) for doc_len_tokens steps using the strategy-renormalized
// distribution and a per-document derived seed. Documents are labeled
// machine with source = strategy name; ids are "<source>-<index>".
// prompts[i % prompts.size()] seeds document i.
Corpus generate_corpus(const MarkovModel& model, const DecodingStrategy& strategy,
                       int32_t n_docs, int32_t doc_len_tokens,
                       const std::vector<std::vector<std::string>>& prompts, uint64_t seed);

// Seeded prompt contexts sampled as random `order`-token windows of the
// training text.
std::vector<std::vector<std::string>> sample_prompts(std::string_view training_text,
                                                     int32_t order, int32_t n_prompts,
                                                     uint64_t seed);

}  // namespace repdet
