#include "repdet/markov.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>

#include "repdet/errors.hpp"
#include "repdet/rng.hpp"
#include "repdet/text.hpp"

namespace repdet {

namespace {

// Accumulated floating error in a cumulative sum; also the slack applied to
// the inclusive nucleus boundary so that p = 1.0 keeps the full support.
constexpr double kMassTolerance = 1e-9;

std::string pack_context(const std::vector<int32_t>& ids) {
    std::string key(ids.size() * sizeof(int32_t), '\0');
    if (!ids.empty()) std::memcpy(key.data(), ids.data(), key.size());
    return key;
}

}  // namespace

const char* to_string(DecodingKind kind) {
    switch (kind) {
        case DecodingKind::greedy: return "greedy";
        case DecodingKind::ancestral: return "ancestral";
        case DecodingKind::topk: return "topk";
        case DecodingKind::nucleus: return "nucleus";
    }
    return "?";
}

DecodingKind parse_decoding_kind(std::string_view name) {
    if (name == "greedy") return DecodingKind::greedy;
    if (name == "ancestral") return DecodingKind::ancestral;
    if (name == "topk") return DecodingKind::topk;
    if (name == "nucleus") return DecodingKind::nucleus;
    throw UsageError("unknown decoding strategy: " + std::string(name));
}

std::vector<double> renormalize(const std::vector<double>& dist, const DecodingStrategy& strategy) {
    if (dist.empty()) throw InternalError("renormalize: empty distribution");
    double sum = 0.0;
    for (size_t i = 0; i < dist.size(); ++i) {
        if (i > 0 && dist[i] > dist[i - 1])
            throw InternalError("renormalize: distribution not sorted descending");
        if (dist[i] < 0.0) throw InternalError("renormalize: negative probability");
        sum += dist[i];
    }
    if (std::abs(sum - 1.0) > kMassTolerance)
        throw InternalError("renormalize: distribution does not sum to 1");

    std::vector<double> out(dist.size(), 0.0);
    switch (strategy.kind) {
        case DecodingKind::ancestral:
            return dist;
        case DecodingKind::greedy:
            out[0] = 1.0;
            return out;
        case DecodingKind::topk: {
            if (strategy.k < 1) throw UsageError("topk requires k >= 1");
            size_t keep = std::min<size_t>(static_cast<size_t>(strategy.k), dist.size());
            double z = 0.0;
            for (size_t i = 0; i < keep; ++i) z += dist[i];
            for (size_t i = 0; i < keep; ++i) out[i] = dist[i] / z;
            return out;
        }
        case DecodingKind::nucleus: {
            if (!(strategy.p > 0.0 && strategy.p <= 1.0))
                throw UsageError("nucleus requires 0 < p <= 1");
            size_t keep = 1;  // the most probable token always stays
            double cumulative = dist[0];
            while (keep < dist.size() &&
                   cumulative + dist[keep] <= strategy.p + kMassTolerance) {
                cumulative += dist[keep];
                ++keep;
            }
            double z = cumulative;
            for (size_t i = 0; i < keep; ++i) out[i] = dist[i] / z;
            return out;
        }
    }
    throw InternalError("renormalize: unreachable");
}

int32_t MarkovModel::token_id(std::string_view tok) const {
    auto it = vocab_index_.find(std::string(tok));
    return it == vocab_index_.end() ? -1 : it->second;
}

MarkovModel::Dist MarkovModel::build_dist(const ContextEntry& entry) const {
    Dist dist;
    const auto vocab = static_cast<int64_t>(vocab_.size());
    if (smoothing_ > 0.0) {
        // Seen successors keep their (count desc, id asc) order and every
        // other vocabulary token follows with the flat smoothed mass.
        const double denom = static_cast<double>(entry.total) + smoothing_ * static_cast<double>(vocab);
        dist.tokens.reserve(static_cast<size_t>(vocab));
        dist.probs.reserve(static_cast<size_t>(vocab));
        std::vector<uint8_t> seen(static_cast<size_t>(vocab), 0);
        for (const auto& [tok, count] : entry.counts) {
            dist.tokens.push_back(tok);
            dist.probs.push_back((static_cast<double>(count) + smoothing_) / denom);
            seen[static_cast<size_t>(tok)] = 1;
        }
        for (int32_t tok = 0; tok < vocab; ++tok) {
            if (seen[static_cast<size_t>(tok)]) continue;
            dist.tokens.push_back(tok);
            dist.probs.push_back(smoothing_ / denom);
        }
    } else {
        dist.tokens.reserve(entry.counts.size());
        dist.probs.reserve(entry.counts.size());
        for (const auto& [tok, count] : entry.counts) {
            dist.tokens.push_back(tok);
            dist.probs.push_back(static_cast<double>(count) / static_cast<double>(entry.total));
        }
    }
    return dist;
}

MarkovModel::Dist MarkovModel::next_distribution(const std::vector<int32_t>& context) const {
    bool usable = static_cast<int32_t>(context.size()) == order_;
    for (int32_t id : context)
        if (id < 0) usable = false;
    if (usable) {
        auto it = table_.find(pack_context(context));
        if (it != table_.end()) return build_dist(it->second);
    }
    return build_dist(unigram_);
}

MarkovModel fit_markov(std::string_view training_text, int32_t order, double smoothing) {
    if (order < 0) throw UsageError("order must be >= 0");
    if (smoothing < 0.0) throw UsageError("smoothing must be >= 0");
    auto tokens = split_tokens(training_text);
    if (static_cast<int64_t>(tokens.size()) <= order)
        throw DataError("training text shorter than the model order");

    MarkovModel model;
    model.order_ = order;
    model.smoothing_ = smoothing;

    std::vector<int32_t> ids;
    ids.reserve(tokens.size());
    for (auto tok : tokens) {
        auto [it, inserted] = model.vocab_index_.emplace(std::string(tok),
                                                         static_cast<int32_t>(model.vocab_.size()));
        if (inserted) model.vocab_.push_back(std::string(tok));
        ids.push_back(it->second);
    }

    // Raw tallies first; successor lists are sorted once at the end.
    std::unordered_map<std::string, std::unordered_map<int32_t, int64_t>> raw;
    std::unordered_map<int32_t, int64_t> raw_unigram;
    for (size_t i = 0; i < ids.size(); ++i) ++raw_unigram[ids[i]];
    if (order > 0) {
        std::vector<int32_t> context(static_cast<size_t>(order));
        for (size_t i = static_cast<size_t>(order); i < ids.size(); ++i) {
            std::copy(ids.begin() + static_cast<ptrdiff_t>(i) - order,
                      ids.begin() + static_cast<ptrdiff_t>(i), context.begin());
            ++raw[pack_context(context)][ids[i]];
        }
    }

    auto finalize = [](const std::unordered_map<int32_t, int64_t>& counts) {
        MarkovModel::ContextEntry entry;
        entry.counts.assign(counts.begin(), counts.end());
        std::sort(entry.counts.begin(), entry.counts.end(),
                  [](const auto& a, const auto& b) {
                      if (a.second != b.second) return a.second > b.second;
                      return a.first < b.first;
                  });
        for (const auto& [tok, count] : entry.counts) entry.total += count;
        return entry;
    };

    model.unigram_ = finalize(raw_unigram);
    if (order == 0) {
        model.table_.emplace(std::string(), model.unigram_);
    } else {
        model.table_.reserve(raw.size());
        for (auto& [key, counts] : raw) model.table_.emplace(key, finalize(counts));
    }
    return model;
}

Corpus generate_corpus(const MarkovModel& model, const DecodingStrategy& strategy,
                       int32_t n_docs, int32_t doc_len_tokens,
                       const std::vector<std::vector<std::string>>& prompts, uint64_t seed) {
    if (n_docs < 0) throw UsageError("n_docs must be >= 0");
    if (doc_len_tokens < 1) throw UsageError("doc_len_tokens must be >= 1");
    if (prompts.empty()) throw UsageError("at least one prompt is required");

    Corpus corpus;
    corpus.provenance = std::string("markov:") + to_string(strategy.kind);

    // Renormalized distributions are cached per context; contexts repeat
    // heavily during generation and the sort/renormalize work dominates.
    struct CachedDist {
        std::vector<int32_t> tokens;
        std::vector<double> probs;
    };
    std::unordered_map<std::string, CachedDist> cache;

    const auto order = static_cast<size_t>(model.order());
    std::vector<int32_t> context;
    for (int32_t d = 0; d < n_docs; ++d) {
        Rng rng(derive_seed(seed, static_cast<uint64_t>(d)));
        const auto& prompt = prompts[static_cast<size_t>(d) % prompts.size()];

        std::vector<int32_t> history;
        history.reserve(prompt.size() + static_cast<size_t>(doc_len_tokens));
        for (const auto& tok : prompt) history.push_back(model.token_id(tok));

        std::string text;
        for (int32_t step = 0; step < doc_len_tokens; ++step) {
            context.clear();
            if (history.size() >= order)
                context.assign(history.end() - static_cast<ptrdiff_t>(order), history.end());
            // A short context keys the unigram fallback exactly like
            // next_distribution would.
            std::string key = pack_context(context);
            auto it = cache.find(key);
            if (it == cache.end()) {
                auto dist = model.next_distribution(context);
                auto probs = renormalize(dist.probs, strategy);
                it = cache.emplace(std::move(key), CachedDist{std::move(dist.tokens), std::move(probs)})
                         .first;
            }
            const auto& cached = it->second;
            double u = rng.unit();
            double cumulative = 0.0;
            int32_t picked = -1;
            for (size_t i = 0; i < cached.probs.size(); ++i) {
                if (cached.probs[i] <= 0.0) break;  // support is a prefix
                picked = cached.tokens[i];
                cumulative += cached.probs[i];
                if (u < cumulative) break;
            }
            // u beyond the accumulated mass (float shortfall) keeps the
            // last supported token.
            history.push_back(picked);
            if (!text.empty()) text.push_back(' ');
            text += model.token(picked);
        }

        Document doc;
        doc.id = std::string(to_string(strategy.kind)) + "-" + std::to_string(d);
        doc.text = std::move(text);
        doc.gold_label = GoldLabel::machine;
        doc.source = to_string(strategy.kind);
        corpus.documents.push_back(std::move(doc));
    }
    return corpus;
}

std::vector<std::vector<std::string>> sample_prompts(std::string_view training_text,
                                                     int32_t order, int32_t n_prompts,
                                                     uint64_t seed) {
    if (n_prompts < 1) throw UsageError("n_prompts must be >= 1");
    auto tokens = split_tokens(training_text);
    size_t window = std::max<int32_t>(order, 1);
    if (tokens.size() < window) throw DataError("training text shorter than the prompt window");

    Rng rng(derive_seed(seed, 0x70726F6D70ULL));  // distinct stream from generation
    std::vector<std::vector<std::string>> prompts;
    prompts.reserve(static_cast<size_t>(n_prompts));
    for (int32_t i = 0; i < n_prompts; ++i) {
        size_t start = static_cast<size_t>(rng.below(tokens.size() - window + 1));
        std::vector<std::string> prompt;
        prompt.reserve(window);
        for (size_t j = 0; j < window; ++j) prompt.emplace_back(tokens[start + j]);
        prompts.push_back(std::move(prompt));
    }
    return prompts;
}

}  // namespace repdet
