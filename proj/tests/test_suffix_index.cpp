#include "doctest.h"

#include <algorithm>

#include "oracles.hpp"
#include "repdet/errors.hpp"
#include "repdet/rng.hpp"
#include "repdet/suffix_index.hpp"
#include "support.hpp"

using namespace repdet;
using repdet::testing::TempDir;

namespace {

Corpus single_doc(std::string text) {
    Corpus corpus;
    corpus.documents.push_back({"d0", std::move(text), std::nullopt, ""});
    return corpus;
}

Corpus docs(std::vector<std::string> texts) {
    Corpus corpus;
    for (size_t i = 0; i < texts.size(); ++i)
        corpus.documents.push_back({"d" + std::to_string(i), std::move(texts[i]), std::nullopt, ""});
    return corpus;
}

}  // namespace

TEST_CASE("banana: frozen sa and lcp, cross-checked against the naive oracle") {
    auto index = build_index(single_doc("banana"));
    // positions of: "", a, ana, anana, banana, na, nana
    CHECK(index.sa == std::vector<int32_t>{6, 5, 3, 1, 0, 4, 2});
    CHECK(index.lcp == std::vector<int32_t>{0, 0, 1, 3, 0, 0, 2});
    CHECK(index.sa == oracle::naive_suffix_array(index.text));
    CHECK(index.lcp == oracle::naive_lcp(index.text, index.sa));
}

TEST_CASE("two identical documents: separator orders below every byte") {
    auto index = build_index(docs({"ab", "ab"}));
    CHECK(index.sa == oracle::naive_suffix_array(index.text));
    CHECK(index.lcp == oracle::naive_lcp(index.text, index.sa));
    // the separator suffix sorts between the terminal and all byte suffixes
    CHECK(index.text[2] == kSeparator);
    CHECK(index.doc_of(0) == 0);
    CHECK(index.doc_of(2) == -1);
    CHECK(index.doc_of(3) == 1);
    CHECK(index.doc_of(static_cast<int32_t>(index.text.size()) - 1) == -1);
}

TEST_CASE("build_index rejects empty corpora and empty documents") {
    CHECK_THROWS_AS(build_index(Corpus{}), DataError);
    CHECK_THROWS_AS(build_index(docs({"ok", ""})), DataError);
}

TEST_CASE("build_index is deterministic") {
    auto corpus = docs({"the quick brown fox", "jumps over", "the quick brown fox"});
    auto a = build_index(corpus);
    auto b = build_index(corpus);
    CHECK(a.sa == b.sa);
    CHECK(a.lcp == b.lcp);
}

TEST_CASE("sa/lcp match the naive oracle on random corpora") {
    Rng rng(2024);
    const int32_t alphabets[] = {2, 4, 16, 256};
    for (int trial = 0; trial < 60; ++trial) {
        auto corpus =
            oracle::random_corpus(rng, 400, 4, alphabets[trial % 4]);
        auto index = build_index(corpus);
        REQUIRE(index.sa == oracle::naive_suffix_array(index.text));
        REQUIRE(index.lcp == oracle::naive_lcp(index.text, index.sa));
    }
}

TEST_CASE("doc_of maps every position to its owning document") {
    Rng rng(11);
    auto corpus = oracle::random_corpus(rng, 200, 5, 8);
    auto index = build_index(corpus);
    int32_t pos = 0;
    for (size_t d = 0; d < corpus.size(); ++d) {
        if (d > 0) {
            CHECK(index.doc_of(pos) == -1);  // separator
            ++pos;
        }
        for (size_t i = 0; i < corpus.documents[d].text.size(); ++i, ++pos)
            CHECK(index.doc_of(pos) == static_cast<int32_t>(d));
    }
    CHECK(index.doc_of(pos) == -1);  // terminal
}

TEST_CASE("lcp_intervals: banana contains the ana interval") {
    auto index = build_index(single_doc("banana"));
    auto intervals = lcp_intervals(index, 1);
    CHECK(std::find(intervals.begin(), intervals.end(), LcpInterval{3, 2, 3}) != intervals.end());
    // depth-1 interval covering "a", "ana", "anana"
    CHECK(std::find(intervals.begin(), intervals.end(), LcpInterval{1, 1, 3}) != intervals.end());
}

TEST_CASE("lcp_intervals: aaaa yields nested intervals for a, aa, aaa") {
    auto index = build_index(single_doc("aaaa"));
    auto intervals = lcp_intervals(index, 1);
    REQUIRE(intervals.size() == 3);
    CHECK(std::find(intervals.begin(), intervals.end(), LcpInterval{1, 1, 4}) != intervals.end());
    CHECK(std::find(intervals.begin(), intervals.end(), LcpInterval{2, 2, 4}) != intervals.end());
    CHECK(std::find(intervals.begin(), intervals.end(), LcpInterval{3, 3, 4}) != intervals.end());
}

TEST_CASE("lcp_intervals: min_depth above the longest repeat is empty") {
    auto index = build_index(single_doc("banana"));
    CHECK(lcp_intervals(index, 4).empty());
}

TEST_CASE("lcp_intervals match the brute-force enumeration on random corpora") {
    Rng rng(55);
    for (int trial = 0; trial < 40; ++trial) {
        auto corpus = oracle::random_corpus(rng, 150, 3, trial % 2 ? 3 : 5);
        auto index = build_index(corpus);
        auto got = lcp_intervals(index, 1);
        std::sort(got.begin(), got.end(), [](const LcpInterval& a, const LcpInterval& b) {
            return std::tie(a.depth, a.lo, a.hi) < std::tie(b.depth, b.lo, b.hi);
        });
        auto want = oracle::brute_lcp_intervals(index.text, 1);
        REQUIRE(got.size() == want.size());
        for (size_t i = 0; i < got.size(); ++i) REQUIRE(got[i] == want[i]);
    }
}

TEST_CASE("every interval is reported exactly once") {
    Rng rng(77);
    auto corpus = oracle::random_corpus(rng, 300, 2, 3);
    auto index = build_index(corpus);
    auto intervals = lcp_intervals(index, 1);
    std::sort(intervals.begin(), intervals.end(),
              [](const LcpInterval& a, const LcpInterval& b) {
                  return std::tie(a.depth, a.lo, a.hi) < std::tie(b.depth, b.lo, b.hi);
              });
    CHECK(std::adjacent_find(intervals.begin(), intervals.end()) == intervals.end());
    for (const auto& iv : intervals) CHECK(iv.hi > iv.lo);
}

TEST_CASE("index cache round-trips and rejects a different corpus") {
    TempDir dir;
    auto corpus = docs({"abcabcabc", "the cat sat", "abcabc"});
    auto index = build_index(corpus);
    auto cache = dir / "index.bin";
    save_index_cache(index, cache);

    CorpusIndex loaded;
    REQUIRE(load_index_cache(corpus, cache, loaded));
    CHECK(loaded.sa == index.sa);
    CHECK(loaded.lcp == index.lcp);
    CHECK(loaded.doc_start == index.doc_start);
    CHECK(loaded.content_hash == index.content_hash);

    auto other = docs({"entirely", "different"});
    CorpusIndex miss;
    CHECK_FALSE(load_index_cache(other, cache, miss));
    CHECK_FALSE(load_index_cache(corpus, dir / "absent.bin", miss));
}
