#include "repdet/classifier.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>

#include "repdet/errors.hpp"
#include "repdet/rng.hpp"
#include "repdet/text.hpp"

namespace repdet {

namespace {

inline double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

// log(1 + e^x) without overflow
inline double log1pexp(double x) { return x > 0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x)); }

void check_config(const ClassifierConfig& cfg) {
    if (cfg.min_n < 1 || cfg.min_n > cfg.max_n) throw UsageError("invalid ngram range");
    if (cfg.hash_dim < 2 || (cfg.hash_dim & (cfg.hash_dim - 1)) != 0)
        throw UsageError("hash_dim must be a power of two");
    if (cfg.epochs < 1) throw UsageError("epochs must be >= 1");
    if (cfg.learning_rate <= 0.0) throw UsageError("learning_rate must be > 0");
    if (cfg.l2 < 0.0) throw UsageError("l2 must be >= 0");
}

constexpr char kModelMagic[4] = {'R', 'D', 'C', 'L'};
constexpr uint8_t kModelVersion = 1;

template <class T>
void put_raw(std::ofstream& out, T v) {
    static_assert(std::is_trivially_copyable_v<T>);
    unsigned char buf[sizeof(T)];
    std::memcpy(buf, &v, sizeof(T));
    out.write(reinterpret_cast<const char*>(buf), sizeof(T));
}

template <class T>
T get_raw(std::ifstream& in) {
    unsigned char buf[sizeof(T)];
    if (!in.read(reinterpret_cast<char*>(buf), sizeof(T)))
        throw DataError("truncated model file");
    T v;
    std::memcpy(&v, buf, sizeof(T));
    return v;
}

}  // namespace

FeatureVector featurize(std::string_view text, const ClassifierConfig& cfg) {
    check_config(cfg);
    auto starts = utf8_char_starts(text);
    const auto n_chars = static_cast<int32_t>(starts.size()) - 1;
    const auto mask = static_cast<uint64_t>(cfg.hash_dim - 1);

    std::vector<int32_t> indices;
    for (int32_t n = cfg.min_n; n <= cfg.max_n; ++n) {
        for (int32_t i = 0; i + n <= n_chars; ++i) {
            auto begin = static_cast<size_t>(starts[static_cast<size_t>(i)]);
            auto end = static_cast<size_t>(starts[static_cast<size_t>(i + n)]);
            uint64_t h = fnv1a64(text.data() + begin, end - begin);
            indices.push_back(static_cast<int32_t>(h & mask));
        }
    }
    std::sort(indices.begin(), indices.end());

    FeatureVector fv;
    double norm_sq = 0.0;
    for (size_t i = 0; i < indices.size();) {
        size_t j = i;
        while (j < indices.size() && indices[j] == indices[i]) ++j;
        auto count = static_cast<float>(j - i);
        fv.entries.emplace_back(indices[i], count);
        norm_sq += static_cast<double>(count) * count;
        i = j;
    }
    if (norm_sq > 0.0) {
        auto inv = static_cast<float>(1.0 / std::sqrt(norm_sq));
        for (auto& [idx, val] : fv.entries) val *= inv;
    }
    return fv;
}

double TrainedClassifier::score(const FeatureVector& features) const {
    double z = bias_;
    for (const auto& [idx, val] : features.entries)
        z += weights_[static_cast<size_t>(idx)] * static_cast<double>(val);
    return sigmoid(z);
}

double TrainedClassifier::score_text(std::string_view text) const {
    return score(featurize(text, config_));
}

LossGradient loss_and_gradient(std::span<const FeatureVector> features,
                               std::span<const uint8_t> labels, std::span<const double> weights,
                               double bias, double l2) {
    if (features.size() != labels.size() || features.empty())
        throw UsageError("loss_and_gradient: features/labels mismatch");
    LossGradient out;
    out.grad_weights.assign(weights.size(), 0.0);
    const double inv_n = 1.0 / static_cast<double>(features.size());

    for (size_t e = 0; e < features.size(); ++e) {
        double z = bias;
        for (const auto& [idx, val] : features[e].entries)
            z += weights[static_cast<size_t>(idx)] * static_cast<double>(val);
        const double y = labels[e] ? 1.0 : 0.0;
        // cross-entropy: log(1+e^z) - y*z
        out.loss += (log1pexp(z) - y * z) * inv_n;
        const double g = (sigmoid(z) - y) * inv_n;
        for (const auto& [idx, val] : features[e].entries)
            out.grad_weights[static_cast<size_t>(idx)] += g * static_cast<double>(val);
        out.grad_bias += g;
    }
    double w_sq = 0.0;
    for (size_t i = 0; i < weights.size(); ++i) {
        out.grad_weights[i] += l2 * weights[i];
        w_sq += weights[i] * weights[i];
    }
    out.loss += 0.5 * l2 * w_sq;
    return out;
}

TrainedClassifier train(std::span<const FeatureVector> pos, std::span<const FeatureVector> neg,
                        const ClassifierConfig& cfg, TrainStats* stats) {
    check_config(cfg);
    if (pos.empty() || neg.empty()) throw DataError("train: both classes must be non-empty");

    const size_t n = pos.size() + neg.size();
    std::vector<const FeatureVector*> examples(n);
    std::vector<uint8_t> labels(n);
    for (size_t i = 0; i < pos.size(); ++i) {
        examples[i] = &pos[i];
        labels[i] = 1;
    }
    for (size_t i = 0; i < neg.size(); ++i) {
        examples[pos.size() + i] = &neg[i];
        labels[pos.size() + i] = 0;
    }

    if (stats) {
        stats->epoch_loss.clear();
        stats->degenerate_features = true;
        for (size_t e = 1; e < n && stats->degenerate_features; ++e)
            if (examples[e]->entries != examples[0]->entries)
                stats->degenerate_features = false;
    }

    std::vector<double> weights(static_cast<size_t>(cfg.hash_dim), 0.0);
    double bias = 0.0;
    Rng rng(cfg.seed);

    if (cfg.full_batch) {
        std::vector<FeatureVector> flat(n);
        for (size_t e = 0; e < n; ++e) flat[e] = *examples[e];
        for (int32_t epoch = 0; epoch < cfg.epochs; ++epoch) {
            auto lg = loss_and_gradient(flat, labels, weights, bias, cfg.l2);
            for (size_t i = 0; i < weights.size(); ++i)
                weights[i] -= cfg.learning_rate * lg.grad_weights[i];
            bias -= cfg.learning_rate * lg.grad_bias;
            if (stats)
                stats->epoch_loss.push_back(
                    loss_and_gradient(flat, labels, weights, bias, cfg.l2).loss);
        }
    } else {
        std::vector<size_t> order(n);
        for (size_t i = 0; i < n; ++i) order[i] = i;
        for (int32_t epoch = 0; epoch < cfg.epochs; ++epoch) {
            for (size_t i = 0; i + 1 < n; ++i) {
                size_t j = i + static_cast<size_t>(rng.below(n - i));
                std::swap(order[i], order[j]);
            }
            for (size_t e : order) {
                double z = bias;
                for (const auto& [idx, val] : examples[e]->entries)
                    z += weights[static_cast<size_t>(idx)] * static_cast<double>(val);
                const double g = sigmoid(z) - (labels[e] ? 1.0 : 0.0);
                // L2 decay applied to touched coordinates only; with sparse
                // features this is the usual lazy approximation.
                for (const auto& [idx, val] : examples[e]->entries) {
                    auto& w = weights[static_cast<size_t>(idx)];
                    w -= cfg.learning_rate * (g * static_cast<double>(val) + cfg.l2 * w);
                }
                bias -= cfg.learning_rate * g;
            }
            if (stats) {
                double loss = 0.0;
                const double inv_n = 1.0 / static_cast<double>(n);
                for (size_t e = 0; e < n; ++e) {
                    double z = bias;
                    for (const auto& [idx, val] : examples[e]->entries)
                        z += weights[static_cast<size_t>(idx)] * static_cast<double>(val);
                    loss += (log1pexp(z) - (labels[e] ? z : 0.0)) * inv_n;
                }
                double w_sq = 0.0;
                for (double w : weights) w_sq += w * w;
                stats->epoch_loss.push_back(loss + 0.5 * cfg.l2 * w_sq);
            }
        }
    }

    for (double w : weights)
        if (!std::isfinite(w)) throw InternalError("train: non-finite weight");
    if (!std::isfinite(bias)) throw InternalError("train: non-finite bias");
    return TrainedClassifier(std::move(weights), bias, cfg);
}

TrainedClassifier train_documents(std::span<const Document> pos, std::span<const Document> neg,
                                  const ClassifierConfig& cfg, TrainStats* stats) {
    std::vector<FeatureVector> pos_f(pos.size()), neg_f(neg.size());
    for (size_t i = 0; i < pos.size(); ++i) pos_f[i] = featurize(pos[i].text, cfg);
    for (size_t i = 0; i < neg.size(); ++i) neg_f[i] = featurize(neg[i].text, cfg);
    return train(pos_f, neg_f, cfg, stats);
}

void TrainedClassifier::save(const std::filesystem::path& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write model: " + path.string());
    out.write(kModelMagic, 4);
    out.put(static_cast<char>(kModelVersion));
    put_raw<int32_t>(out, config_.min_n);
    put_raw<int32_t>(out, config_.max_n);
    put_raw<int32_t>(out, config_.hash_dim);
    put_raw<int32_t>(out, config_.epochs);
    put_raw<double>(out, config_.learning_rate);
    put_raw<double>(out, config_.l2);
    put_raw<uint64_t>(out, config_.seed);
    put_raw<uint8_t>(out, config_.full_batch ? 1 : 0);
    put_raw<double>(out, bias_);
    put_raw<uint64_t>(out, weights_.size());
    for (double w : weights_) put_raw<double>(out, w);
    if (!out) throw DataError("write failed: " + path.string());
}

TrainedClassifier TrainedClassifier::load(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open model: " + path.string());
    char magic[4];
    if (!in.read(magic, 4) || std::memcmp(magic, kModelMagic, 4) != 0)
        throw DataError("not a model file: " + path.string());
    if (in.get() != kModelVersion) throw DataError("unsupported model version");

    ClassifierConfig cfg;
    cfg.min_n = get_raw<int32_t>(in);
    cfg.max_n = get_raw<int32_t>(in);
    cfg.hash_dim = get_raw<int32_t>(in);
    cfg.epochs = get_raw<int32_t>(in);
    cfg.learning_rate = get_raw<double>(in);
    cfg.l2 = get_raw<double>(in);
    cfg.seed = get_raw<uint64_t>(in);
    cfg.full_batch = get_raw<uint8_t>(in) != 0;
    double bias = get_raw<double>(in);
    auto n = get_raw<uint64_t>(in);
    if (n != static_cast<uint64_t>(cfg.hash_dim)) throw DataError("corrupt model file");
    std::vector<double> weights(n);
    for (auto& w : weights) w = get_raw<double>(in);
    return TrainedClassifier(std::move(weights), bias, cfg);
}

}  // namespace repdet
