#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string_view>
#include <vector>

#include "repdet/corpus.hpp"

namespace repdet {

struct ClassifierConfig {
    int32_t min_n = 3;  // character n-gram range, inclusive
    int32_t max_n = 5;
    int32_t hash_dim = 1 << 18;  // power of two
    int32_t epochs = 10;
    double learning_rate = 0.1;
    double l2 = 1e-4;
    uint64_t seed = 0;
    bool full_batch = false;  // exact gradient steps instead of SGD
};

// Sparse hashed feature vector, L2-normalized per document. Indices are
// unique and ascending.
struct FeatureVector {
    std::vector<std::pair<int32_t, float>> entries;
};

// Hashed character n-gram counts of `text`, normalized to unit L2. Hashing
// is FNV-1a over the n-gram bytes, so identical text produces identical
// features on every platform.
FeatureVector featurize(std::string_view text, const ClassifierConfig& cfg);

struct TrainStats {
    std::vector<double> epoch_loss;      // mean logistic loss + L2 after each epoch
    bool degenerate_features = false;    // every example had identical features
};

class TrainedClassifier {
public:
    TrainedClassifier() = default;
    TrainedClassifier(std::vector<double> weights, double bias, ClassifierConfig cfg)
        : weights_(std::move(weights)), bias_(bias), config_(cfg) {}

    double score(const FeatureVector& features) const;  // P(machine) in (0,1)
    double score_text(std::string_view text) const;

    const std::vector<double>& weights() const { return weights_; }
    double bias() const { return bias_; }
    const ClassifierConfig& config() const { return config_; }

    void save(const std::filesystem::path& path) const;
    static TrainedClassifier load(const std::filesystem::path& path);

private:
    std::vector<double> weights_;
    double bias_ = 0.0;
    ClassifierConfig config_;
};

// Logistic-loss linear model over hashed n-gram features, fit by seeded SGD
// (or exact full-batch steps when cfg.full_batch). Deterministic given the
// inputs and cfg.seed.
TrainedClassifier train(std::span<const FeatureVector> pos, std::span<const FeatureVector> neg,
                        const ClassifierConfig& cfg, TrainStats* stats = nullptr);

TrainedClassifier train_documents(std::span<const Document> pos, std::span<const Document> neg,
                                  const ClassifierConfig& cfg, TrainStats* stats = nullptr);

// Mean logistic loss + (l2/2)||w||^2 and its exact gradient over a labeled
// set; the reference implementation for full-batch training and for
// finite-difference checks.
struct LossGradient {
    double loss = 0.0;
    std::vector<double> grad_weights;
    double grad_bias = 0.0;
};
LossGradient loss_and_gradient(std::span<const FeatureVector> features,
                               std::span<const uint8_t> labels, std::span<const double> weights,
                               double bias, double l2);

}  // namespace repdet
