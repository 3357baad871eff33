#include "repdet/repeat_miner.hpp"

#include <algorithm>
#include <fstream>

#include "json.hpp"
#include "repdet/errors.hpp"
#include "repdet/text.hpp"

namespace repdet {

std::vector<Repeat> mine_supermaximal(const CorpusIndex& index, const MinerConfig& cfg) {
    if (cfg.min_len < 1) throw UsageError("min_len must be >= 1");
    if (cfg.min_occ < 2) throw UsageError("min_occ must be >= 2");
    if (index.text.empty()) throw DataError("index is empty");

    // A prefix of d bytes holds at most d characters, so intervals shallower
    // than min_len bytes can never reach min_len characters.
    const auto min_depth = static_cast<int32_t>(std::min<int64_t>(cfg.min_len, INT32_MAX));

    std::vector<Repeat> repeats;
    std::vector<uint8_t> seen_prev(kSigma + 1, 0);
    std::vector<int32_t> touched;

    for_each_lcp_interval(index.lcp, min_depth, [&](const LcpInterval& iv, bool has_embedded) {
        if (has_embedded) return;  // some right extension is still repeated
        if (iv.hi - iv.lo + 1 < cfg.min_occ) return;

        // Left-extendability: two occurrences preceded by the same symbol
        // mean that extension is repeated too. Position 0 has a virtual
        // predecessor distinct from every real symbol.
        bool left_extendable = false;
        bool saw_position_zero = false;
        touched.clear();
        for (int32_t i = iv.lo; i <= iv.hi && !left_extendable; ++i) {
            int32_t pos = index.sa[static_cast<size_t>(i)];
            if (pos == 0) {
                if (saw_position_zero) left_extendable = true;
                saw_position_zero = true;
                continue;
            }
            Symbol prev = index.text[static_cast<size_t>(pos - 1)];
            if (seen_prev[prev]) left_extendable = true;
            seen_prev[prev] = 1;
            touched.push_back(prev);
        }
        for (int32_t sym : touched) seen_prev[static_cast<size_t>(sym)] = 0;
        if (left_extendable) return;

        // All occurrences share identical symbols over the matched prefix,
        // so either every one crosses a separator or none does.
        const int32_t first = index.sa[static_cast<size_t>(iv.lo)];
        for (int32_t d = 0; d < iv.depth; ++d)
            if (index.text[static_cast<size_t>(first + d)] < 2) return;

        Repeat rep;
        rep.substring.reserve(static_cast<size_t>(iv.depth));
        for (int32_t d = 0; d < iv.depth; ++d)
            rep.substring.push_back(
                static_cast<char>(index.text[static_cast<size_t>(first + d)] - 2));
        rep.length_chars = static_cast<int64_t>(utf8_length(rep.substring));
        if (rep.length_chars < cfg.min_len) return;

        rep.occurrences.reserve(static_cast<size_t>(iv.hi - iv.lo + 1));
        for (int32_t i = iv.lo; i <= iv.hi; ++i) {
            int32_t pos = index.sa[static_cast<size_t>(i)];
            rep.occurrences.push_back({pos, index.doc_of(pos)});
        }
        std::sort(rep.occurrences.begin(), rep.occurrences.end(),
                  [](const RepeatOccurrence& a, const RepeatOccurrence& b) {
                      return a.position < b.position;
                  });
        rep.doc_set.reserve(rep.occurrences.size());
        for (const auto& occ : rep.occurrences) rep.doc_set.push_back(occ.doc);
        std::sort(rep.doc_set.begin(), rep.doc_set.end());
        rep.doc_set.erase(std::unique(rep.doc_set.begin(), rep.doc_set.end()),
                          rep.doc_set.end());
        repeats.push_back(std::move(rep));
    });

    // Super-maximality makes substrings unique, so ordering by substring is
    // a total order; it equals the suffix-array order of the intervals.
    std::sort(repeats.begin(), repeats.end(),
              [](const Repeat& a, const Repeat& b) { return a.substring < b.substring; });
    return repeats;
}

std::vector<int32_t> docs_containing(std::span<const Repeat> repeats,
                                     std::span<const int32_t> subset) {
    std::vector<int32_t> docs;
    for (int32_t idx : subset) {
        if (idx < 0 || static_cast<size_t>(idx) >= repeats.size())
            throw UsageError("repeat index out of range: " + std::to_string(idx));
        const auto& set = repeats[static_cast<size_t>(idx)].doc_set;
        docs.insert(docs.end(), set.begin(), set.end());
    }
    std::sort(docs.begin(), docs.end());
    docs.erase(std::unique(docs.begin(), docs.end()), docs.end());
    return docs;
}

std::map<int64_t, int64_t> repeat_length_histogram(std::span<const Repeat> repeats,
                                                   int64_t bucket_width) {
    if (bucket_width < 1) throw UsageError("bucket_width must be >= 1");
    std::map<int64_t, int64_t> hist;
    for (const auto& rep : repeats)
        ++hist[(rep.length_chars / bucket_width) * bucket_width];
    return hist;
}

void save_repeats(std::span<const Repeat> repeats, const Corpus& corpus,
                  const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write repeat dump: " + path.string());
    for (const auto& rep : repeats) {
        nlohmann::ordered_json rec;
        rec["substring"] = rep.substring;
        rec["length_chars"] = rep.length_chars;
        rec["n_occurrences"] = rep.occurrences.size();
        auto ids = nlohmann::json::array();
        for (int32_t d : rep.doc_set) ids.push_back(corpus.documents[static_cast<size_t>(d)].id);
        rec["doc_ids"] = ids;
        out << rec.dump(-1, ' ', false, nlohmann::json::error_handler_t::replace) << '\n';
    }
    if (!out) throw DataError("write failed: " + path.string());
}

}  // namespace repdet
