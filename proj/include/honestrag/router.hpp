#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <optional>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "honestrag/corpus.hpp"
#include "honestrag/gateway.hpp"
#include "honestrag/pruner.hpp"
#include "honestrag/types.hpp"

namespace honestrag {

enum class Branch { rag_movie_accepted, fallback_finetuned, fallback_no_context };

inline std::string_view to_string(Branch b) {
    switch (b) {
        case Branch::rag_movie_accepted: return "rag_movie_accepted";
        case Branch::fallback_finetuned: return "fallback_finetuned";
        case Branch::fallback_no_context: return "fallback_no_context";
    }
    return "fallback_finetuned";
}

inline std::optional<Branch> parse_branch(std::string_view s) {
    if (s == "rag_movie_accepted") return Branch::rag_movie_accepted;
    if (s == "fallback_finetuned") return Branch::fallback_finetuned;
    if (s == "fallback_no_context") return Branch::fallback_no_context;
    return std::nullopt;
}

/// Forces a pipeline variant: hybrid is the full routing below;
/// finetuned_only skips retrieval entirely and always asks the fine-tuned
/// model (the pre-hybrid baseline).
enum class PipelineMode { hybrid, finetuned_only };

struct RoutingOutcome {
    std::string interaction_id;
    std::string final_answer;
    Branch branch = Branch::fallback_finetuned;
    std::optional<ModelExchange> rag_exchange;
    std::optional<ModelExchange> finetuned_exchange;
    std::optional<PrunedContext> pruned;
    std::string error_note;  // empty unless the record failed and was isolated
};

namespace detail {

inline ModelExchange ask_finetuned(const ChatBackend& ft_backend, const QueryRecord& record) {
    ModelExchange ex;
    ex.prompt = record.query;  // the fine-tuned model receives the bare question
    ex.raw_output = ft_backend.complete("", record.query, DecodeParams{});
    return ex;
}

}  // namespace detail

/// One pass of the hybrid pipeline over a single question:
///   1. segment + prune the search results against the query;
///   2. no seed passes the threshold -> skip RAG, ask the fine-tuned model
///      (fallback_no_context);
///   3. otherwise ask the RAG backend with the pruned references and extract
///      the structured answer;
///   4. the RAG answer is invalid iff extraction failed or it classifies as
///      "invalid question";
///   5. movie-domain and valid -> it becomes the final answer
///      (rag_movie_accepted); anything else -> fine-tuned fallback.
/// A movie-domain "i don't know" is accepted, not routed to fallback.
inline RoutingOutcome route(const QueryRecord& record, const ChatBackend& rag_backend,
                            const ChatBackend& ft_backend, const EmbeddingProvider& provider,
                            const PrunerConfig& cfg,
                            PipelineMode mode = PipelineMode::hybrid) {
    static const SentenceSegmenter segmenter;

    RoutingOutcome outcome;
    outcome.interaction_id = record.interaction_id;

    if (mode == PipelineMode::finetuned_only) {
        outcome.finetuned_exchange = detail::ask_finetuned(ft_backend, record);
        outcome.final_answer = text::normalize_answer(outcome.finetuned_exchange->raw_output);
        outcome.branch = Branch::fallback_finetuned;
        return outcome;
    }

    const std::vector<SentenceUnit> units = segmenter.segment_all(record.search_results);
    outcome.pruned = prune(record.query, units, provider, cfg);

    if (!gate(*outcome.pruned)) {
        outcome.finetuned_exchange = detail::ask_finetuned(ft_backend, record);
        outcome.final_answer = text::normalize_answer(outcome.finetuned_exchange->raw_output);
        outcome.branch = Branch::fallback_no_context;
        return outcome;
    }

    ModelExchange rag;
    rag.prompt = render_rag_prompt(record.query, outcome.pruned->expanded_text);
    rag.raw_output = rag_backend.complete("", rag.prompt, DecodeParams{});
    bool invalid = false;
    try {
        rag.parsed = extract_first_json(rag.raw_output);
        invalid = classify_answer(rag.parsed->answer) == AnswerClass::invalid_question;
    } catch (const ExtractionError& e) {
        rag.parse_error = e.what();
        invalid = true;
    }
    outcome.rag_exchange = std::move(rag);

    const bool movie = outcome.rag_exchange->parsed.has_value() &&
                       outcome.rag_exchange->parsed->domain == AnswerDomain::movie;
    if (movie && !invalid) {
        outcome.final_answer = outcome.rag_exchange->parsed->answer;
        outcome.branch = Branch::rag_movie_accepted;
        return outcome;
    }

    outcome.finetuned_exchange = detail::ask_finetuned(ft_backend, record);
    outcome.final_answer = text::normalize_answer(outcome.finetuned_exchange->raw_output);
    outcome.branch = Branch::fallback_finetuned;
    return outcome;
}

/// Routes every record, preserving input order. Per-record failures
/// (BackendFailure and other errors) never abort the batch: the failed
/// record's outcome becomes "i don't know" with the error recorded in
/// error_note. With parallelism > 1 records are processed concurrently;
/// results are independent of scheduling.
inline std::vector<RoutingOutcome> run_batch(const std::vector<QueryRecord>& records,
                                             const ChatBackend& rag_backend,
                                             const ChatBackend& ft_backend,
                                             const EmbeddingProvider& provider,
                                             const PrunerConfig& cfg,
                                             PipelineMode mode = PipelineMode::hybrid,
                                             int parallelism = 1) {
    std::vector<RoutingOutcome> outcomes(records.size());
    if (records.empty()) return outcomes;

    auto process = [&](std::size_t i) {
        try {
            outcomes[i] = route(records[i], rag_backend, ft_backend, provider, cfg, mode);
        } catch (const std::exception& e) {
            RoutingOutcome failed;
            failed.interaction_id = records[i].interaction_id;
            failed.final_answer = "i don't know";
            failed.branch = Branch::fallback_finetuned;
            failed.error_note = e.what();
            outcomes[i] = std::move(failed);
        }
    };

    const std::size_t workers =
        std::min<std::size_t>(records.size(), static_cast<std::size_t>(std::max(parallelism, 1)));
    if (workers <= 1) {
        for (std::size_t i = 0; i < records.size(); ++i) process(i);
        return outcomes;
    }

    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            while (true) {
                const std::size_t i = next.fetch_add(1);
                if (i >= records.size()) return;
                process(i);
            }
        });
    }
    for (std::thread& t : pool) t.join();
    return outcomes;
}

}  // namespace honestrag
