#pragma once

// Deterministic corpus fixtures for the generator-dependent tests. The
// training text is a seeded walk over a fixed sparse word-transition chain
// with skewed successor weights, which gives a fitted Markov model realistic
// branching: restricted-support decoding concentrates probability enough to
// produce long repeats while full-support sampling stays diverse.

#include <cstdint>
#include <string>

#include "repdet/corpus.hpp"
#include "repdet/markov.hpp"

namespace repdet::fixture {

struct TrainingTextConfig {
    int32_t n_tokens = 200000;
    int32_t vocab = 1200;
    int32_t successors = 100;  // out-degree of each word in the true chain
    double skew = 1.0;         // successor weight ~ 1/(rank+1)^skew
};

std::string make_training_text(uint64_t seed, const TrainingTextConfig& cfg = {});

// One decoding-strategy corpus from a model fitted on make_training_text.
struct SynthConfig {
    int32_t n_docs = 2000;
    int32_t doc_len_tokens = 100;
    int32_t order = 1;
    double alpha = 0.0;
};

Corpus make_strategy_corpus(const std::string& training_text, const DecodingStrategy& strategy,
                            const SynthConfig& cfg, uint64_t seed);

// The detection test bed: topk (k=10) documents labeled machine plus an
// equal-size ancestral corpus relabeled human as the human proxy, ids kept
// distinct, concatenated machine-first.
struct Mixture {
    Corpus combined;
    std::string training_text;
};
Mixture make_mixture(uint64_t seed, const SynthConfig& cfg = {});

}  // namespace repdet::fixture
