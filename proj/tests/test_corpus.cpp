#include "doctest.h"

#include <set>

#include "repdet/corpus.hpp"
#include "repdet/errors.hpp"
#include "repdet/rng.hpp"
#include "repdet/text.hpp"
#include "support.hpp"

using namespace repdet;
using repdet::testing::TempDir;
using repdet::testing::slurp;
using repdet::testing::spit;

TEST_CASE("load_corpus parses jsonl records") {
    TempDir dir;
    auto path = dir / "corpus.jsonl";
    spit(path,
         R"({"id":"a","text":"first","label":"human"})" "\n"
         R"({"id":"b","text":"second","source":"gpt"})" "\n"
         R"({"id":"c","text":"third","label":"machine"})" "\n");
    auto result = load_corpus(path, CorpusFormat::jsonl);
    REQUIRE(result.corpus.size() == 3);
    CHECK(result.skipped.empty());
    CHECK(result.corpus.documents[0].id == "a");
    CHECK(result.corpus.documents[0].gold_label == GoldLabel::human);
    CHECK(result.corpus.documents[1].source == "gpt");
    CHECK(result.corpus.documents[2].gold_label == GoldLabel::machine);
}

TEST_CASE("load_corpus on an empty file yields an empty corpus with no error") {
    TempDir dir;
    auto path = dir / "empty.jsonl";
    spit(path, "");
    auto result = load_corpus(path, CorpusFormat::jsonl);
    CHECK(result.corpus.empty());
    CHECK(result.skipped.empty());
}

TEST_CASE("load_corpus skips malformed lines and reports them") {
    TempDir dir;
    auto path = dir / "corpus.jsonl";
    spit(path,
         R"({"id":"a","text":"ok"})" "\n"
         "this is not json\n"
         R"({"id":"b","text":"also ok"})" "\n");
    auto result = load_corpus(path, CorpusFormat::jsonl);
    CHECK(result.corpus.size() == 2);
    REQUIRE(result.skipped.size() == 1);
    CHECK(result.skipped[0].line == 2);
}

TEST_CASE("load_corpus assigns counter ids and rejects duplicates") {
    TempDir dir;
    auto path = dir / "corpus.jsonl";
    spit(path,
         R"({"text":"no id here"})" "\n"
         R"({"id":"x","text":"one"})" "\n"
         R"({"id":"x","text":"two"})" "\n");
    auto result = load_corpus(path, CorpusFormat::jsonl);
    REQUIRE(result.corpus.size() == 2);
    CHECK(result.corpus.documents[0].id == "1");
    REQUIRE(result.skipped.size() == 1);
    CHECK(result.skipped[0].reason == "duplicate id");
}

TEST_CASE("load_corpus reads a directory of txt files in sorted order") {
    TempDir dir;
    auto sub = dir / "docs";
    std::filesystem::create_directory(sub);
    spit(sub / "b.txt", "second doc");
    spit(sub / "a.txt", "first doc");
    spit(sub / "ignored.dat", "not text");
    auto result = load_corpus(sub, CorpusFormat::plaintext_dir);
    REQUIRE(result.corpus.size() == 2);
    CHECK(result.corpus.documents[0].id == "a");
    CHECK(result.corpus.documents[1].id == "b");
}

TEST_CASE("load_corpus errors on an unreadable path") {
    CHECK_THROWS_AS(load_corpus("/nonexistent/nowhere.jsonl", CorpusFormat::jsonl), DataError);
}

TEST_CASE("save/load round-trip preserves ids, texts and order byte-for-byte") {
    Corpus corpus;
    corpus.documents.push_back({"one", "plain ascii", GoldLabel::human, "src"});
    corpus.documents.push_back({"two", "unicode: \xC3\xA9\xE2\x82\xAC end", GoldLabel::machine, ""});
    corpus.documents.push_back({"three", std::string("binary \x01\x02 bytes"), std::nullopt, ""});

    TempDir dir;
    auto path = dir / "out.jsonl";
    save_corpus(corpus, path);
    auto loaded = load_corpus(path, CorpusFormat::jsonl).corpus;
    REQUIRE(loaded.size() == corpus.size());
    for (size_t i = 0; i < corpus.size(); ++i) {
        CHECK(loaded.documents[i].id == corpus.documents[i].id);
        CHECK(loaded.documents[i].text == corpus.documents[i].text);
        CHECK(loaded.documents[i].gold_label == corpus.documents[i].gold_label);
    }
    // and a second save is byte-identical
    auto path2 = dir / "out2.jsonl";
    save_corpus(loaded, path2);
    CHECK(slurp(path) == slurp(path2));
}

namespace {
Document doc_of_chars(std::string id, size_t n) {
    return {std::move(id), std::string(n, 'x'), std::nullopt, ""};
}
}  // namespace

TEST_CASE("filter_and_trim applies the length rules") {
    SplitConfig cfg;
    cfg.min_chars = 300;
    cfg.trim_chars = 300;

    Corpus corpus;
    corpus.documents.push_back(doc_of_chars("short", 299));
    corpus.documents.push_back(doc_of_chars("long", 450));
    corpus.documents.push_back(doc_of_chars("exact", 300));

    auto out = filter_and_trim(corpus, cfg);
    REQUIRE(out.size() == 2);
    CHECK(out.documents[0].id == "long");
    CHECK(utf8_length(out.documents[0].text) == 300);
    CHECK(out.documents[1].id == "exact");
    CHECK(out.documents[1].text == corpus.documents[2].text);
}

TEST_CASE("filter_and_trim counts characters, not bytes") {
    SplitConfig cfg;
    cfg.min_chars = 3;
    cfg.trim_chars = 4;
    Corpus corpus;
    // 6 two-byte characters
    corpus.documents.push_back({"multi", "\xC3\xA9\xC3\xA9\xC3\xA9\xC3\xA9\xC3\xA9\xC3\xA9",
                                std::nullopt, ""});
    auto out = filter_and_trim(corpus, cfg);
    REQUIRE(out.size() == 1);
    CHECK(out.documents[0].text == "\xC3\xA9\xC3\xA9\xC3\xA9\xC3\xA9");  // no split sequence
}

TEST_CASE("filter_and_trim is idempotent") {
    Rng rng(7);
    Corpus corpus;
    for (int i = 0; i < 50; ++i) {
        size_t len = rng.below(600) + 1;
        std::string text;
        for (size_t j = 0; j < len; ++j)
            text.push_back(static_cast<char>('a' + rng.below(26)));
        corpus.documents.push_back({"d" + std::to_string(i), text, std::nullopt, ""});
    }
    SplitConfig cfg;
    cfg.min_chars = 100;
    cfg.trim_chars = 300;
    auto once = filter_and_trim(corpus, cfg);
    auto twice = filter_and_trim(once, cfg);
    REQUIRE(once.size() == twice.size());
    for (size_t i = 0; i < once.size(); ++i) CHECK(once.documents[i].text == twice.documents[i].text);
}

namespace {
Corpus mixed_corpus(size_t humans, size_t machines) {
    Corpus corpus;
    for (size_t i = 0; i < humans; ++i)
        corpus.documents.push_back({"h" + std::to_string(i), "human text", GoldLabel::human, ""});
    for (size_t i = 0; i < machines; ++i)
        corpus.documents.push_back({"m" + std::to_string(i), "machine text", GoldLabel::machine, ""});
    return corpus;
}
}  // namespace

TEST_CASE("split_human_holdout takes floor(fraction * humans)") {
    auto corpus = mixed_corpus(1000, 500);
    SplitConfig cfg;
    cfg.human_holdout_fraction = 0.05;
    cfg.seed = 99;
    auto split = split_human_holdout(corpus, cfg);
    CHECK(split.holdout.size() == 50);
    CHECK(split.working.size() == corpus.size() - 50);
    for (const auto& doc : split.holdout.documents) CHECK(doc.gold_label == GoldLabel::human);
}

TEST_CASE("split_human_holdout with fraction 0 moves nothing") {
    auto corpus = mixed_corpus(10, 10);
    SplitConfig cfg;
    cfg.human_holdout_fraction = 0.0;
    auto split = split_human_holdout(corpus, cfg);
    CHECK(split.holdout.empty());
    CHECK(split.working.size() == corpus.size());
}

TEST_CASE("split_human_holdout is deterministic per seed and partitions the corpus") {
    auto corpus = mixed_corpus(120, 40);
    SplitConfig cfg;
    cfg.human_holdout_fraction = 0.25;
    cfg.seed = 5;
    auto a = split_human_holdout(corpus, cfg);
    auto b = split_human_holdout(corpus, cfg);
    REQUIRE(a.holdout.size() == b.holdout.size());
    for (size_t i = 0; i < a.holdout.size(); ++i)
        CHECK(a.holdout.documents[i].id == b.holdout.documents[i].id);

    // disjoint union back to the input
    std::set<std::string> ids;
    for (const auto& d : a.working.documents) ids.insert(d.id);
    for (const auto& d : a.holdout.documents) CHECK(ids.insert(d.id).second);
    CHECK(ids.size() == corpus.size());

    cfg.seed = 6;
    auto c = split_human_holdout(corpus, cfg);
    std::set<std::string> h_a, h_c;
    for (const auto& d : a.holdout.documents) h_a.insert(d.id);
    for (const auto& d : c.holdout.documents) h_c.insert(d.id);
    CHECK(h_a != h_c);
}

TEST_CASE("split_human_holdout requires human documents when fraction > 0") {
    auto corpus = mixed_corpus(0, 10);
    SplitConfig cfg;
    cfg.human_holdout_fraction = 0.5;
    CHECK_THROWS_AS(split_human_holdout(corpus, cfg), DataError);
}
