#include "repdet/ensemble.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <fstream>
#include <mutex>
#include <thread>

#include "json.hpp"
#include "repdet/errors.hpp"
#include "repdet/rng.hpp"
#include "repdet/suffix_index.hpp"

namespace repdet {

namespace {

int32_t resolve_threads(int32_t requested) {
    if (requested > 0) return requested;
    auto hw = static_cast<int32_t>(std::thread::hardware_concurrency());
    return hw > 0 ? hw : 1;
}

void parallel_for(int32_t n, int32_t threads, const std::function<void(int32_t)>& body) {
    threads = std::min(threads, n);
    if (threads <= 1) {
        for (int32_t i = 0; i < n; ++i) body(i);
        return;
    }
    std::atomic<int32_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    pool.reserve(static_cast<size_t>(threads));
    for (int32_t t = 0; t < threads; ++t)
        pool.emplace_back([&] {
            try {
                for (;;) {
                    int32_t i = next.fetch_add(1);
                    if (i >= n) return;
                    body(i);
                }
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!error) error = std::current_exception();
            }
        });
    for (auto& th : pool) th.join();
    if (error) std::rethrow_exception(error);
}

std::string format_margin(double margin) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", margin);
    return buf;
}

}  // namespace

DetectionResult run_detection(const Corpus& working, const Corpus& holdout,
                              const EnsembleConfig& cfg) {
    if (cfg.experts < 1) throw UsageError("experts (K) must be >= 1");
    const auto n_docs = static_cast<int32_t>(working.size());

    DetectionResult result;
    result.ranked.experts_requested = cfg.experts;

    auto index = build_index(working);
    result.repeats = mine_supermaximal(index, cfg.miner);
    if (result.repeats.empty())
        throw DataError("no repeats above thresholds (min_len=" + std::to_string(cfg.miner.min_len) +
                        ", min_occ=" + std::to_string(cfg.miner.min_occ) + ")");

    const int32_t threads = resolve_threads(cfg.threads);

    // Features are shared by every round; compute them once.
    std::vector<FeatureVector> working_features(working.size());
    parallel_for(n_docs, threads, [&](int32_t d) {
        working_features[static_cast<size_t>(d)] =
            featurize(working.documents[static_cast<size_t>(d)].text, cfg.classifier);
    });
    std::vector<FeatureVector> holdout_features(holdout.size());
    if (cfg.round.mode == LabelMode::semi_supervised)
        parallel_for(static_cast<int32_t>(holdout.size()), threads, [&](int32_t d) {
            holdout_features[static_cast<size_t>(d)] =
                featurize(holdout.documents[static_cast<size_t>(d)].text, cfg.classifier);
        });

    RoundConfig round_cfg = cfg.round;
    round_cfg.seed = cfg.master_seed;

    // Per-round outputs land in k-indexed slots; aggregation happens in
    // round order afterwards so scheduling cannot change any result.
    std::vector<DetectionRound> rounds(static_cast<size_t>(cfg.experts));
    std::vector<std::vector<double>> margins(static_cast<size_t>(cfg.experts));
    std::vector<std::string> round_errors(static_cast<size_t>(cfg.experts));

    parallel_for(cfg.experts, threads, [&](int32_t k) {
        try {
            auto round = build_round(result.repeats, working, holdout, round_cfg, k);
            if (!round.degenerate) {
                std::vector<FeatureVector> pos, neg;
                pos.reserve(round.positives.size());
                for (int32_t d : round.positives)
                    pos.push_back(working_features[static_cast<size_t>(d)]);
                neg.reserve(round.negatives.size());
                const auto& neg_source = cfg.round.mode == LabelMode::semi_supervised
                                             ? holdout_features
                                             : working_features;
                for (int32_t d : round.negatives)
                    neg.push_back(neg_source[static_cast<size_t>(d)]);

                ClassifierConfig clf_cfg = cfg.classifier;
                clf_cfg.seed = derive_seed(cfg.master_seed, 2 * static_cast<uint64_t>(k) + 1);
                auto model = train(pos, neg, clf_cfg);

                auto& scores = margins[static_cast<size_t>(k)];
                scores.resize(static_cast<size_t>(n_docs));
                for (int32_t d = 0; d < n_docs; ++d)
                    scores[static_cast<size_t>(d)] =
                        model.score(working_features[static_cast<size_t>(d)]) - 0.5;
            }
            rounds[static_cast<size_t>(k)] = std::move(round);
        } catch (const std::exception& e) {
            round_errors[static_cast<size_t>(k)] = e.what();
        }
    });
    for (const auto& err : round_errors)
        if (!err.empty()) throw DataError("round failed: " + err);

    std::vector<int32_t> votes(static_cast<size_t>(n_docs), 0);
    std::vector<double> margin_sum(static_cast<size_t>(n_docs), 0.0);
    int32_t effective = 0;
    for (int32_t k = 0; k < cfg.experts; ++k) {
        const auto& round = rounds[static_cast<size_t>(k)];
        RoundAudit audit;
        audit.round_id = k;
        audit.degenerate = round.degenerate;
        audit.sampled_repeats = round.sampled_repeats;
        for (int32_t d : round.positives)
            audit.positive_ids.push_back(working.documents[static_cast<size_t>(d)].id);
        const auto& neg_corpus =
            cfg.round.mode == LabelMode::semi_supervised ? holdout : working;
        for (int32_t d : round.negatives)
            audit.negative_ids.push_back(neg_corpus.documents[static_cast<size_t>(d)].id);
        result.rounds.push_back(std::move(audit));
        for (const auto& warning : round.warnings)
            result.ranked.notices.push_back("round " + std::to_string(k) + ": " + warning);

        if (round.degenerate) continue;
        ++effective;
        const auto& scores = margins[static_cast<size_t>(k)];
        for (int32_t d = 0; d < n_docs; ++d) {
            if (scores[static_cast<size_t>(d)] > 0.0) ++votes[static_cast<size_t>(d)];
            margin_sum[static_cast<size_t>(d)] += scores[static_cast<size_t>(d)];
        }
    }
    if (effective == 0) throw DataError("all rounds degenerate; nothing to rank");
    result.ranked.effective_experts = effective;

    result.ranked.entries.resize(static_cast<size_t>(n_docs));
    for (int32_t d = 0; d < n_docs; ++d) {
        auto& entry = result.ranked.entries[static_cast<size_t>(d)];
        entry.doc_id = working.documents[static_cast<size_t>(d)].id;
        entry.doc = d;
        entry.votes = votes[static_cast<size_t>(d)];
        entry.mean_margin = margin_sum[static_cast<size_t>(d)] / static_cast<double>(effective);
        entry.gold = working.documents[static_cast<size_t>(d)].gold_label;
    }
    std::sort(result.ranked.entries.begin(), result.ranked.entries.end(),
              [](const RankedEntry& a, const RankedEntry& b) {
                  if (a.votes != b.votes) return a.votes > b.votes;
                  if (a.mean_margin != b.mean_margin) return a.mean_margin > b.mean_margin;
                  return a.doc_id < b.doc_id;
              });
    return result;
}

FullClassification full_classification(const Corpus& corpus, const Corpus& holdout_human,
                                       const RankedList& ranked, int32_t top_n,
                                       const ClassifierConfig& clf_cfg, const Corpus& test) {
    if (top_n < 1) throw UsageError("top_n must be >= 1 (empty positive class)");
    if (static_cast<size_t>(top_n) > ranked.entries.size())
        throw UsageError("top_n exceeds the ranking size");
    for (const auto& doc : holdout_human.documents)
        if (doc.gold_label != GoldLabel::human)
            throw DataError("holdout contains a non-human document: " + doc.id);
    if (static_cast<int32_t>(holdout_human.size()) < top_n)
        throw DataError("insufficient gold human documents: need " + std::to_string(top_n) +
                        ", have " + std::to_string(holdout_human.size()));
    if (test.empty()) throw DataError("empty test corpus");

    std::vector<Document> pos;
    pos.reserve(static_cast<size_t>(top_n));
    for (int32_t i = 0; i < top_n; ++i)
        pos.push_back(corpus.documents[static_cast<size_t>(ranked.entries[static_cast<size_t>(i)].doc)]);

    Rng rng(derive_seed(clf_cfg.seed, 0x66636C66ULL));
    auto picks = sample_without_replacement(static_cast<int32_t>(holdout_human.size()), top_n, rng);
    std::sort(picks.begin(), picks.end());
    std::vector<Document> neg;
    neg.reserve(picks.size());
    for (int32_t p : picks) neg.push_back(holdout_human.documents[static_cast<size_t>(p)]);

    FullClassification out;
    out.model = train_documents(pos, neg, clf_cfg);

    int64_t correct = 0;
    for (const auto& doc : test.documents) {
        if (!doc.gold_label) throw DataError("test document missing gold label: " + doc.id);
        bool predicted_machine = out.model.score_text(doc.text) > 0.5;
        if (predicted_machine == (doc.gold_label == GoldLabel::machine)) ++correct;
    }
    out.test_size = static_cast<int64_t>(test.size());
    out.accuracy = static_cast<double>(correct) / static_cast<double>(out.test_size);
    return out;
}

void save_ranking_csv(const RankedList& ranked, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write ranking: " + path.string());
    out << "rank,doc_id,votes,mean_margin,gold_label\n";
    for (size_t i = 0; i < ranked.entries.size(); ++i) {
        const auto& e = ranked.entries[i];
        out << (i + 1) << ',' << e.doc_id << ',' << e.votes << ',' << format_margin(e.mean_margin)
            << ',' << (e.gold ? to_string(*e.gold) : "") << '\n';
    }
    if (!out) throw DataError("write failed: " + path.string());
}

void save_ranking_jsonl(const RankedList& ranked, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write ranking: " + path.string());
    for (size_t i = 0; i < ranked.entries.size(); ++i) {
        const auto& e = ranked.entries[i];
        nlohmann::ordered_json rec;
        rec["rank"] = i + 1;
        rec["doc_id"] = e.doc_id;
        rec["votes"] = e.votes;
        rec["mean_margin"] = e.mean_margin;
        if (e.gold) rec["gold_label"] = to_string(*e.gold);
        out << rec.dump() << '\n';
    }
    if (!out) throw DataError("write failed: " + path.string());
}

void save_round_audit(const std::vector<RoundAudit>& rounds, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write audit log: " + path.string());
    for (const auto& round : rounds) {
        nlohmann::ordered_json rec;
        rec["round"] = round.round_id;
        rec["degenerate"] = round.degenerate;
        rec["sampled_repeats"] = round.sampled_repeats;
        rec["positive_ids"] = round.positive_ids;
        rec["negative_ids"] = round.negative_ids;
        out << rec.dump() << '\n';
    }
    if (!out) throw DataError("write failed: " + path.string());
}

}  // namespace repdet
