// repdet: corpus-level detection of machine-generated documents.
//
// Subcommands cover the full pipeline: ingest/normalize corpora, generate
// synthetic corpora from a Markov model, mine super-maximal repeats, run the
// self-trained detection ensemble, evaluate rankings, report diversity, and
// train the pseudo-relevance full classifier. Every run writes a resolved
// config snapshot next to its outputs; re-running from the snapshot
// reproduces the outputs byte for byte.

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "repdet/classifier.hpp"
#include "repdet/corpus.hpp"
#include "repdet/ensemble.hpp"
#include "repdet/errors.hpp"
#include "repdet/markov.hpp"
#include "repdet/metrics.hpp"
#include "repdet/pseudo_label.hpp"
#include "repdet/repeat_miner.hpp"
#include "repdet/suffix_index.hpp"

namespace fs = std::filesystem;
using namespace repdet;

namespace {

CorpusFormat parse_format(const std::string& name) {
    if (name == "jsonl") return CorpusFormat::jsonl;
    if (name == "txtdir") return CorpusFormat::plaintext_dir;
    throw UsageError("unknown corpus format: " + name);
}

Corpus load_reported(const fs::path& path, const std::string& format) {
    auto result = load_corpus(path, parse_format(format));
    for (const auto& skip : result.skipped)
        std::cerr << "skipped record (line " << skip.line << "): " << skip.reason << "\n";
    if (!result.skipped.empty())
        std::cerr << result.skipped.size() << " record(s) skipped\n";
    return std::move(result.corpus);
}

// Resolved-config snapshot: one flat `flag=value` line per option, explicit
// values first-class and defaults filled in, repeated lines for multi-value
// options. Reload with --config; explicit flags override file values.
void write_snapshot(CLI::App* cmd, const fs::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write config snapshot: " + path.string());
    for (const auto* opt : cmd->get_options()) {
        if (opt->get_lnames().empty()) continue;
        const auto& key = opt->get_lnames().front();
        if (key == "help" || key == "config") continue;
        if (opt->count() > 0)
            for (const auto& value : opt->results()) out << key << '=' << value << '\n';
        else
            out << key << '=' << opt->get_default_str() << '\n';
    }
    if (!out) throw DataError("write failed: " + path.string());
}

// Expands `--config FILE` into `--key value` tokens ahead of parsing. Keys
// already present on the command line are skipped, so flags win over the
// file. Empty values are dropped (they mark unset optional flags).
std::vector<std::string> expand_config_args(const std::vector<std::string>& args) {
    std::string config_path;
    std::vector<std::string> out;
    for (size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--config") {
            if (i + 1 >= args.size()) throw UsageError("--config requires a file path");
            config_path = args[++i];
        } else if (args[i].rfind("--config=", 0) == 0) {
            config_path = args[i].substr(9);
        } else {
            out.push_back(args[i]);
        }
    }
    if (config_path.empty()) return out;

    std::ifstream in(config_path, std::ios::binary);
    if (!in) throw DataError("cannot open config file: " + config_path);
    std::string line;
    size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line[0] == '#') continue;
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw DataError("malformed config line " + std::to_string(line_no) + " in " +
                            config_path);
        std::string key = line.substr(0, eq);
        std::string value = line.substr(eq + 1);
        if (value.empty()) continue;
        std::string flag = "--" + key;
        bool overridden = false;
        for (const auto& arg : out)
            if (arg == flag || arg.rfind(flag + "=", 0) == 0) overridden = true;
        if (overridden) continue;
        out.push_back(flag);
        out.push_back(value);
    }
    return out;
}

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open file: " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

// --- ingest ---------------------------------------------------------------

struct IngestOpts {
    std::string input;
    std::string format = "jsonl";
    uint64_t min_chars = 0;
    uint64_t trim_chars = 0;
    double holdout_fraction = 0.0;
    uint64_t seed = 0;
    std::string out;
    std::string holdout_out;
};

void run_ingest(const IngestOpts& opts, CLI::App* cmd) {
    auto corpus = load_reported(opts.input, opts.format);
    SplitConfig cfg;
    cfg.min_chars = opts.min_chars;
    cfg.trim_chars = opts.trim_chars;
    cfg.human_holdout_fraction = opts.holdout_fraction;
    cfg.seed = opts.seed;

    corpus = filter_and_trim(corpus, cfg);
    if (opts.holdout_fraction > 0.0) {
        if (opts.holdout_out.empty())
            throw UsageError("--holdout-out is required when --holdout-fraction > 0");
        auto split = split_human_holdout(corpus, cfg);
        save_corpus(split.working, opts.out);
        save_corpus(split.holdout, opts.holdout_out);
        std::cout << "working: " << split.working.size() << " documents, holdout: "
                  << split.holdout.size() << " documents\n";
    } else {
        save_corpus(corpus, opts.out);
        std::cout << "wrote " << corpus.size() << " documents\n";
    }
    write_snapshot(cmd, opts.out + ".conf");
}

// --- synth -----------------------------------------------------------------

struct SynthOpts {
    std::string train_text;
    int32_t order = 1;
    double alpha = 0.0;
    std::string strategy = "ancestral";
    int32_t k = 10;
    double p = 0.8;
    int32_t n_docs = 0;
    int32_t doc_len = 60;
    uint64_t seed = 0;
    std::string gold_label = "machine";
    std::string out;
};

void run_synth(const SynthOpts& opts, CLI::App* cmd) {
    DecodingStrategy strategy;
    strategy.kind = parse_decoding_kind(opts.strategy);
    strategy.k = opts.k;
    strategy.p = opts.p;

    Corpus corpus;
    if (opts.n_docs > 0) {
        auto training = read_file(opts.train_text);
        auto model = fit_markov(training, opts.order, opts.alpha);
        auto prompts = sample_prompts(training, opts.order, opts.n_docs, opts.seed);
        corpus = generate_corpus(model, strategy, opts.n_docs, opts.doc_len, prompts, opts.seed);
    }
    auto label = parse_gold_label(opts.gold_label);
    if (!label) throw UsageError("unknown gold label: " + opts.gold_label);
    for (auto& doc : corpus.documents) doc.gold_label = label;

    save_corpus(corpus, opts.out);
    write_snapshot(cmd, opts.out + ".conf");
    std::cout << "generated " << corpus.size() << " documents (" << opts.strategy << ")\n";
}

// --- repeats ---------------------------------------------------------------

struct RepeatsOpts {
    std::string input;
    std::string format = "jsonl";
    int64_t min_len = 20;
    int32_t min_occ = 3;
    int64_t bucket_width = 5;
    std::string out;
    std::string histogram_out;
    std::string index_cache;
};

void run_repeats(const RepeatsOpts& opts, CLI::App* cmd) {
    auto corpus = load_reported(opts.input, opts.format);
    if (corpus.empty()) throw DataError("corpus is empty: " + opts.input);

    CorpusIndex index;
    bool cached = false;
    if (!opts.index_cache.empty())
        cached = load_index_cache(corpus, opts.index_cache, index);
    if (!cached) {
        index = build_index(corpus);
        if (!opts.index_cache.empty()) save_index_cache(index, opts.index_cache);
    }

    MinerConfig cfg{opts.min_len, opts.min_occ};
    auto repeats = mine_supermaximal(index, cfg);
    save_repeats(repeats, corpus, opts.out);

    if (!opts.histogram_out.empty()) {
        auto hist = repeat_length_histogram(repeats, opts.bucket_width);
        std::ofstream out(opts.histogram_out, std::ios::binary);
        if (!out) throw DataError("cannot write histogram: " + opts.histogram_out);
        out << "bucket_start,count\n";
        for (const auto& [bucket, count] : hist) out << bucket << ',' << count << '\n';
    }
    write_snapshot(cmd, opts.out + ".conf");
    std::cout << "mined " << repeats.size() << " super-maximal repeats\n";
}

// --- detect ----------------------------------------------------------------

struct DetectOpts {
    std::string input;
    std::string format = "jsonl";
    std::string holdout;
    std::string mode = "unsupervised";
    int32_t experts = 30;
    int32_t repeats_per_round = 20;
    int64_t min_len = 20;
    int32_t min_occ = 3;
    int32_t ngram_min = 3;
    int32_t ngram_max = 5;
    int32_t hash_dim = 1 << 18;
    int32_t epochs = 10;
    double learning_rate = 0.1;
    double l2 = 1e-4;
    uint64_t seed = 0;
    int32_t threads = 0;
    double diversity_bucket = 0.02;
    std::string out_dir;
};

EnsembleConfig make_ensemble_config(const DetectOpts& opts) {
    EnsembleConfig cfg;
    cfg.experts = opts.experts;
    cfg.round.repeats_per_round = opts.repeats_per_round;
    cfg.round.mode = parse_label_mode(opts.mode);
    cfg.miner.min_len = opts.min_len;
    cfg.miner.min_occ = opts.min_occ;
    cfg.classifier.min_n = opts.ngram_min;
    cfg.classifier.max_n = opts.ngram_max;
    cfg.classifier.hash_dim = opts.hash_dim;
    cfg.classifier.epochs = opts.epochs;
    cfg.classifier.learning_rate = opts.learning_rate;
    cfg.classifier.l2 = opts.l2;
    cfg.master_seed = opts.seed;
    cfg.threads = opts.threads;
    return cfg;
}

void run_detect(const DetectOpts& opts, CLI::App* cmd) {
    auto corpus = load_reported(opts.input, opts.format);
    if (corpus.empty()) throw DataError("corpus is empty: " + opts.input);
    Corpus holdout;
    if (!opts.holdout.empty()) holdout = load_reported(opts.holdout, opts.format);

    auto cfg = make_ensemble_config(opts);
    if (cfg.round.mode == LabelMode::semi_supervised && holdout.empty())
        throw UsageError("--mode semi requires --holdout");

    fs::create_directories(opts.out_dir);
    const fs::path dir(opts.out_dir);

    auto result = run_detection(corpus, holdout, cfg);
    save_ranking_csv(result.ranked, dir / "ranking.csv");
    save_ranking_jsonl(result.ranked, dir / "ranking.jsonl");
    save_round_audit(result.rounds, dir / "rounds.jsonl");

    EvalReport report;
    report.effective_experts = result.ranked.effective_experts;
    report.notices = result.ranked.notices;
    report.diversity_bucket_width = opts.diversity_bucket;

    auto gold = gold_labels(corpus);
    const bool fully_labeled = gold.size() == corpus.size();
    if (fully_labeled) {
        for (int64_t m : {10, 50, 100, 200, 500, 1000, 2000, 5000})
            if (m <= static_cast<int64_t>(result.ranked.entries.size()))
                report.precision_at[m] = precision_at_m(result.ranked, gold, m);
        report.baseline = baseline_repeat_containment(corpus, result.repeats, gold);
        report.has_baseline = true;
        save_precision_curve_csv(result.ranked, gold, dir / "precision_curve.csv");
    } else {
        report.notices.push_back(
            "gold labels unavailable for the full corpus; precision metrics omitted");
    }

    std::map<std::string, std::vector<double>> by_source;
    for (const auto& doc : corpus.documents) by_source[doc.source].push_back(diversity(doc));
    for (const auto& [source, values] : by_source) {
        report.diversity_histograms[source] = bucket_histogram(values, opts.diversity_bucket);
        double sum = 0.0;
        for (double v : values) sum += v;
        report.diversity_means[source] = sum / static_cast<double>(values.size());
    }

    save_report_json(report, dir / "report.json");
    write_snapshot(cmd, dir / "config.conf");
    std::cout << "ranked " << result.ranked.entries.size() << " documents with "
              << result.ranked.effective_experts << " effective experts\n";
}

// --- eval ------------------------------------------------------------------

struct EvalOpts {
    std::string ranking;
    std::string corpus;
    std::string format = "jsonl";
    std::vector<int64_t> at;
    std::string out;
    std::string curve_out;
};

RankedList load_ranking(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open ranking: " + path.string());
    RankedList ranked;
    std::string line;
    size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        auto rec = nlohmann::json::parse(line, nullptr, false);
        if (rec.is_discarded() || !rec.contains("doc_id") || !rec["doc_id"].is_string())
            throw DataError("malformed ranking line " + std::to_string(line_no));
        RankedEntry entry;
        entry.doc_id = rec["doc_id"].get<std::string>();
        try {
            entry.votes = rec.value("votes", 0);
            entry.mean_margin = rec.value("mean_margin", 0.0);
            if (rec.contains("gold_label"))
                entry.gold = parse_gold_label(rec["gold_label"].get<std::string>());
        } catch (const nlohmann::json::exception&) {
            throw DataError("malformed ranking line " + std::to_string(line_no));
        }
        ranked.entries.push_back(std::move(entry));
    }
    return ranked;
}

void run_eval(const EvalOpts& opts, CLI::App* cmd) {
    auto ranked = load_ranking(opts.ranking);
    auto corpus = load_reported(opts.corpus, opts.format);
    auto gold = gold_labels(corpus);

    EvalReport report;
    for (int64_t m : opts.at) report.precision_at[m] = precision_at_m(ranked, gold, m);
    if (!opts.curve_out.empty()) save_precision_curve_csv(ranked, gold, opts.curve_out);
    save_report_json(report, opts.out);
    write_snapshot(cmd, opts.out + ".conf");
    for (const auto& [m, p] : report.precision_at)
        std::cout << "precision@" << m << " = " << p << "\n";
}

// --- diversity ---------------------------------------------------------------

struct DiversityOpts {
    std::string input;
    std::string format = "jsonl";
    double bucket_width = 0.02;
    std::string out;
    std::string per_doc_out;
};

void run_diversity(const DiversityOpts& opts, CLI::App* cmd) {
    auto corpus = load_reported(opts.input, opts.format);
    if (corpus.empty()) throw DataError("corpus is empty: " + opts.input);

    EvalReport report;
    report.diversity_bucket_width = opts.bucket_width;
    std::map<std::string, std::vector<double>> by_source;
    std::ofstream per_doc;
    if (!opts.per_doc_out.empty()) {
        per_doc.open(opts.per_doc_out, std::ios::binary);
        if (!per_doc) throw DataError("cannot write: " + opts.per_doc_out);
        per_doc << "doc_id,diversity\n";
    }
    char buf[40];
    for (const auto& doc : corpus.documents) {
        double d = diversity(doc);
        by_source[doc.source].push_back(d);
        if (per_doc.is_open()) {
            std::snprintf(buf, sizeof buf, "%.12g", d);
            per_doc << doc.id << ',' << buf << '\n';
        }
    }
    for (const auto& [source, values] : by_source) {
        report.diversity_histograms[source] = bucket_histogram(values, opts.bucket_width);
        double sum = 0.0;
        for (double v : values) sum += v;
        report.diversity_means[source] = sum / static_cast<double>(values.size());
    }
    save_report_json(report, opts.out);
    write_snapshot(cmd, opts.out + ".conf");
}

// --- full-classify -----------------------------------------------------------

struct FullClassifyOpts {
    std::string input;
    std::string holdout;
    std::string ranking;
    std::string test;
    std::string format = "jsonl";
    int32_t top_n = 200;
    int32_t ngram_min = 3;
    int32_t ngram_max = 5;
    int32_t hash_dim = 1 << 18;
    int32_t epochs = 10;
    double learning_rate = 0.1;
    double l2 = 1e-4;
    uint64_t seed = 0;
    std::string model_out;
    std::string out;
};

void run_full_classify(const FullClassifyOpts& opts, CLI::App* cmd) {
    auto corpus = load_reported(opts.input, opts.format);
    auto holdout = load_reported(opts.holdout, opts.format);
    auto test = load_reported(opts.test, opts.format);
    auto ranked = load_ranking(opts.ranking);

    std::unordered_map<std::string, int32_t> ordinal;
    for (size_t i = 0; i < corpus.size(); ++i)
        ordinal.emplace(corpus.documents[i].id, static_cast<int32_t>(i));
    for (auto& entry : ranked.entries) {
        auto it = ordinal.find(entry.doc_id);
        if (it == ordinal.end())
            throw DataError("ranked document not in corpus: " + entry.doc_id);
        entry.doc = it->second;
    }

    ClassifierConfig cfg;
    cfg.min_n = opts.ngram_min;
    cfg.max_n = opts.ngram_max;
    cfg.hash_dim = opts.hash_dim;
    cfg.epochs = opts.epochs;
    cfg.learning_rate = opts.learning_rate;
    cfg.l2 = opts.l2;
    cfg.seed = opts.seed;

    auto result = full_classification(corpus, holdout, ranked, opts.top_n, cfg, test);
    if (!opts.model_out.empty()) result.model.save(opts.model_out);

    nlohmann::ordered_json j;
    j["top_n"] = opts.top_n;
    j["test_size"] = result.test_size;
    j["accuracy"] = result.accuracy;
    std::ofstream out(opts.out, std::ios::binary);
    if (!out) throw DataError("cannot write: " + opts.out);
    out << j.dump(2) << '\n';
    write_snapshot(cmd, opts.out + ".conf");
    std::cout << "held-out accuracy: " << result.accuracy << " (" << result.test_size
              << " documents)\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"repeat-driven detection of machine-generated documents"};
    app.require_subcommand(1);
    app.footer("Every subcommand accepts --config FILE with flat flag=value lines (the\n"
               "written snapshot format); explicit flags override file values.");
    app.option_defaults()->always_capture_default(true);

    IngestOpts ingest_opts;
    auto* ingest = app.add_subcommand("ingest", "load, filter/trim and split a corpus");
    ingest->add_option("--input", ingest_opts.input, "corpus path")->required();
    ingest->add_option("--format", ingest_opts.format, "jsonl|txtdir");
    ingest->add_option("--min-chars", ingest_opts.min_chars, "drop shorter documents");
    ingest->add_option("--trim-chars", ingest_opts.trim_chars, "trim documents (0 = off)");
    ingest->add_option("--holdout-fraction", ingest_opts.holdout_fraction,
                       "fraction of human documents to hold out");
    ingest->add_option("--seed", ingest_opts.seed, "split seed");
    ingest->add_option("--out", ingest_opts.out, "output jsonl")->required();
    ingest->add_option("--holdout-out", ingest_opts.holdout_out, "holdout output jsonl");
    ingest->callback([&] { run_ingest(ingest_opts, ingest); });

    SynthOpts synth_opts;
    auto* synth = app.add_subcommand("synth", "generate a corpus from a Markov model");
    synth->add_option("--train-text", synth_opts.train_text, "plaintext training file")->required();
    synth->add_option("--order", synth_opts.order, "Markov order in tokens");
    synth->add_option("--alpha", synth_opts.alpha, "add-alpha smoothing");
    synth->add_option("--strategy", synth_opts.strategy, "greedy|ancestral|topk|nucleus");
    synth->add_option("--k", synth_opts.k, "top-k cutoff");
    synth->add_option("--p", synth_opts.p, "nucleus mass");
    synth->add_option("--n-docs", synth_opts.n_docs, "number of documents")->required();
    synth->add_option("--doc-len", synth_opts.doc_len, "tokens per document");
    synth->add_option("--seed", synth_opts.seed, "generation seed");
    synth->add_option("--gold-label", synth_opts.gold_label, "label for generated docs");
    synth->add_option("--out", synth_opts.out, "output jsonl")->required();
    synth->callback([&] { run_synth(synth_opts, synth); });

    RepeatsOpts repeats_opts;
    auto* repeats = app.add_subcommand("repeats", "mine super-maximal repeats");
    repeats->add_option("--input", repeats_opts.input, "corpus path")->required();
    repeats->add_option("--format", repeats_opts.format, "jsonl|txtdir");
    repeats->add_option("--min-len", repeats_opts.min_len, "minimum repeat length in characters");
    repeats->add_option("--min-occ", repeats_opts.min_occ, "minimum occurrence count");
    repeats->add_option("--bucket-width", repeats_opts.bucket_width, "histogram bucket width");
    repeats->add_option("--out", repeats_opts.out, "repeat dump jsonl")->required();
    repeats->add_option("--histogram-out", repeats_opts.histogram_out, "length histogram csv");
    repeats->add_option("--index-cache", repeats_opts.index_cache, "suffix array cache file");
    repeats->callback([&] { run_repeats(repeats_opts, repeats); });

    DetectOpts detect_opts;
    auto* detect = app.add_subcommand("detect", "rank documents by machine-vote count");
    detect->add_option("--input", detect_opts.input, "corpus path")->required();
    detect->add_option("--format", detect_opts.format, "jsonl|txtdir");
    detect->add_option("--holdout", detect_opts.holdout, "human holdout corpus (semi mode)");
    detect->add_option("--mode", detect_opts.mode, "unsupervised|semi");
    detect->add_option("--k-experts", detect_opts.experts, "number of detection rounds");
    detect->add_option("--repeats-per-round", detect_opts.repeats_per_round,
                       "repeats sampled per round");
    detect->add_option("--min-len", detect_opts.min_len, "miner: minimum repeat length, chars");
    detect->add_option("--min-occ", detect_opts.min_occ, "miner: minimum occurrences");
    detect->add_option("--ngram-min", detect_opts.ngram_min, "classifier: smallest n-gram");
    detect->add_option("--ngram-max", detect_opts.ngram_max, "classifier: largest n-gram");
    detect->add_option("--hash-dim", detect_opts.hash_dim, "classifier: hashed feature dim");
    detect->add_option("--epochs", detect_opts.epochs, "classifier: training epochs");
    detect->add_option("--learning-rate", detect_opts.learning_rate, "classifier: SGD step");
    detect->add_option("--l2", detect_opts.l2, "classifier: L2 penalty");
    detect->add_option("--seed", detect_opts.seed, "master seed");
    detect->add_option("--threads", detect_opts.threads, "parallelism cap (0 = auto)");
    detect->add_option("--diversity-bucket", detect_opts.diversity_bucket,
                       "diversity histogram bucket width");
    detect->add_option("--out-dir", detect_opts.out_dir, "output directory")->required();
    detect->callback([&] { run_detect(detect_opts, detect); });

    EvalOpts eval_opts;
    auto* eval = app.add_subcommand("eval", "precision metrics for a saved ranking");
    eval->add_option("--ranking", eval_opts.ranking, "ranking jsonl")->required();
    eval->add_option("--corpus", eval_opts.corpus, "gold-labeled corpus")->required();
    eval->add_option("--format", eval_opts.format, "jsonl|txtdir");
    eval->add_option("--at", eval_opts.at, "precision@m cut-offs");
    eval->add_option("--out", eval_opts.out, "report json")->required();
    eval->add_option("--curve-out", eval_opts.curve_out, "full precision curve csv");
    eval->callback([&] { run_eval(eval_opts, eval); });

    DiversityOpts diversity_opts;
    auto* diversity = app.add_subcommand("diversity", "per-source token diversity report");
    diversity->add_option("--input", diversity_opts.input, "corpus path")->required();
    diversity->add_option("--format", diversity_opts.format, "jsonl|txtdir");
    diversity->add_option("--bucket-width", diversity_opts.bucket_width, "histogram bucket width");
    diversity->add_option("--out", diversity_opts.out, "report json")->required();
    diversity->add_option("--per-doc-out", diversity_opts.per_doc_out, "per-document csv");
    diversity->callback([&] { run_diversity(diversity_opts, diversity); });

    FullClassifyOpts fc_opts;
    auto* fc = app.add_subcommand("full-classify",
                                  "train a classifier from top-ranked documents");
    fc->add_option("--input", fc_opts.input, "working corpus")->required();
    fc->add_option("--holdout", fc_opts.holdout, "gold human corpus")->required();
    fc->add_option("--ranking", fc_opts.ranking, "ranking jsonl from detect")->required();
    fc->add_option("--test", fc_opts.test, "labeled test corpus")->required();
    fc->add_option("--format", fc_opts.format, "jsonl|txtdir");
    fc->add_option("--top-n", fc_opts.top_n, "ranked documents used as positives");
    fc->add_option("--ngram-min", fc_opts.ngram_min, "classifier: smallest n-gram");
    fc->add_option("--ngram-max", fc_opts.ngram_max, "classifier: largest n-gram");
    fc->add_option("--hash-dim", fc_opts.hash_dim, "classifier: hashed feature dim");
    fc->add_option("--epochs", fc_opts.epochs, "classifier: training epochs");
    fc->add_option("--learning-rate", fc_opts.learning_rate, "classifier: SGD step");
    fc->add_option("--l2", fc_opts.l2, "classifier: L2 penalty");
    fc->add_option("--seed", fc_opts.seed, "classifier seed");
    fc->add_option("--model-out", fc_opts.model_out, "serialized model path");
    fc->add_option("--out", fc_opts.out, "accuracy report json")->required();
    fc->callback([&] { run_full_classify(fc_opts, fc); });

    try {
        std::vector<std::string> raw(argv + 1, argv + argc);
        auto expanded = expand_config_args(raw);
        std::reverse(expanded.begin(), expanded.end());  // CLI11 parses reversed vectors
        app.parse(std::move(expanded));
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const DataError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const InternalError& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
