#pragma once

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <tuple>
#include <utility>
#include <vector>

#include "honestrag/embedding.hpp"
#include "honestrag/types.hpp"

namespace honestrag {

/// k / m / n of the sentence pruner plus the context size cap.
struct PrunerConfig {
    int top_k = 10;
    int expand_m = 2;
    double threshold_n = 0.75;
    int max_context_chars = 4000;
};

struct ScoredSentence {
    SentenceUnit unit;
    double similarity = 0.0;
};

struct PrunedContext {
    /// Seed sentences that survived top-k and the threshold, sorted by
    /// similarity descending, ties by (doc, para, sent) ascending.
    std::vector<ScoredSentence> selected;
    /// Seeds plus their paragraph expansions in corpus order, "<DOC> "-marked
    /// at document boundaries, truncated on a sentence boundary.
    std::string expanded_text;
    int seeds_passing_threshold = 0;
};

/// True when the context is usable: at least one seed passed the threshold.
inline bool gate(const PrunedContext& ctx) { return ctx.seeds_passing_threshold >= 1; }

/// Selects the top_k query-most-similar sentences, drops those below
/// threshold_n, expands each survivor with the next expand_m sentences of
/// its own paragraph, deduplicates, and assembles the context in corpus
/// order. Sentences whose embedding (or the query's) is the zero vector get
/// similarity -1 and therefore never seed.
inline PrunedContext prune(std::string_view query, const std::vector<SentenceUnit>& sentences,
                           const EmbeddingProvider& provider, const PrunerConfig& cfg) {
    PrunedContext ctx;
    if (sentences.empty()) return ctx;

    const EmbeddingVector query_vec = provider.embed(query);
    const bool query_zero = query_vec.is_zero();

    std::vector<ScoredSentence> scored;
    scored.reserve(sentences.size());
    for (const SentenceUnit& unit : sentences) {
        const EmbeddingVector vec = provider.embed(unit.text);
        const double sim =
            (query_zero || vec.is_zero()) ? -1.0 : cosine_similarity(query_vec, vec);
        scored.push_back({unit, sim});
    }

    std::sort(scored.begin(), scored.end(), [](const ScoredSentence& a, const ScoredSentence& b) {
        if (a.similarity != b.similarity) return a.similarity > b.similarity;
        return a.unit.key() < b.unit.key();
    });
    const std::size_t kept = std::min<std::size_t>(scored.size(), static_cast<std::size_t>(cfg.top_k));

    for (std::size_t i = 0; i < kept; ++i) {
        if (scored[i].similarity >= cfg.threshold_n) ctx.selected.push_back(scored[i]);
    }
    ctx.seeds_passing_threshold = static_cast<int>(ctx.selected.size());
    if (ctx.selected.empty()) return ctx;

    // Paragraph membership in sentence order, for expansion lookups.
    std::map<std::pair<int, int>, std::vector<const SentenceUnit*>> paragraphs;
    for (const SentenceUnit& unit : sentences) {
        paragraphs[{unit.doc_index, unit.para_index}].push_back(&unit);
    }
    for (auto& entry : paragraphs) {
        std::sort(entry.second.begin(), entry.second.end(),
                  [](const SentenceUnit* a, const SentenceUnit* b) { return a->key() < b->key(); });
    }

    std::set<std::tuple<int, int, int>> chosen;
    for (const ScoredSentence& seed : ctx.selected) chosen.insert(seed.unit.key());
    for (const ScoredSentence& seed : ctx.selected) {
        const auto& para = paragraphs.at({seed.unit.doc_index, seed.unit.para_index});
        auto it = std::find_if(para.begin(), para.end(), [&](const SentenceUnit* u) {
            return u->key() == seed.unit.key();
        });
        for (int step = 0; step < cfg.expand_m && it != para.end(); ++step) {
            ++it;
            if (it == para.end()) break;
            chosen.insert((*it)->key());
        }
    }

    // chosen is already in corpus order ((doc, para, sent) ascending).
    std::map<std::tuple<int, int, int>, const SentenceUnit*> by_key;
    for (const SentenceUnit& unit : sentences) by_key[unit.key()] = &unit;
    std::string out;
    int last_doc = -1;
    for (const auto& key : chosen) {
        const SentenceUnit* unit = by_key.at(key);
        std::string piece;
        if (unit->doc_index != last_doc) piece += "<DOC> ";
        piece += unit->text;
        const std::size_t extra = piece.size() + (out.empty() ? 0 : 1);
        if (out.size() + extra > static_cast<std::size_t>(cfg.max_context_chars)) break;
        if (!out.empty()) out.push_back(' ');
        out += piece;
        last_doc = unit->doc_index;
    }
    ctx.expanded_text = std::move(out);
    return ctx;
}

}  // namespace honestrag
