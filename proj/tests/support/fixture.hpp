#pragma once

// Shared fixtures: a four-question end-to-end sample and a 300-question
// benchmark whose retrieval difficulty is engineered per record by measuring
// stub-embedding similarities while generating the page text.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "honestrag/embedding.hpp"
#include "honestrag/types.hpp"

namespace testsupport {

struct ScriptedFixture {
    std::vector<honestrag::QueryRecord> records;
    std::map<std::string, std::string> rag_rules;
    std::map<std::string, std::string> ft_rules;
    std::string rag_default = "there is no structured answer in this reply";
    std::string ft_default = "i don't know";
};

/// Four questions covering the four interesting paths: correct fine-tuned
/// fallback without context (false premise + comparison), an accepted
/// movie-domain RAG answer, and a RAG parse failure falling back to "i
/// don't know".
inline ScriptedFixture make_example_fixture() {
    using honestrag::Domain;
    using honestrag::QuestionType;
    using honestrag::Timeliness;

    ScriptedFixture fx;
    honestrag::QueryRecord q1;
    q1.interaction_id = "ex-001";
    q1.query = "when did hamburg become the biggest city of germany?";
    q1.answer = "invalid question";
    q1.question_type = QuestionType::false_premise;
    q1.domain = Domain::open;
    q1.timeliness = Timeliness::stable;

    honestrag::QueryRecord q2;
    q2.interaction_id = "ex-002";
    q2.query =
        "which wta player had a higher singles ranking to end last year, madison keys or daria "
        "kasatkina?";
    q2.answer = "madison keys";
    q2.question_type = QuestionType::comparison;
    q2.domain = Domain::sports;
    q2.timeliness = Timeliness::slow_changing;

    honestrag::QueryRecord q3;
    q3.interaction_id = "ex-003";
    q3.query = "what 2010 film was directed by christopher nolan?";
    q3.answer = "inception";
    q3.question_type = QuestionType::simple;
    q3.domain = Domain::movie;
    q3.timeliness = Timeliness::stable;
    q3.search_results.push_back(
        {"nolan filmography", "https://example.test/nolan", "",
         "What 2010 film was directed by Christopher Nolan? Inception is a 2010 science fiction "
         "film written and directed by Christopher Nolan."});

    honestrag::QueryRecord q4;
    q4.interaction_id = "ex-004";
    q4.query = "who were the producers of the movie paul blart: mall cop?";
    q4.answer = "adam sandler, jack giarraputo, kevin james, todd garner";
    q4.alt_answers = {"adam sandler"};
    q4.question_type = QuestionType::post_processing;
    q4.domain = Domain::movie;
    q4.timeliness = Timeliness::stable;
    q4.search_results.push_back(
        {"paul blart", "https://example.test/blart", "",
         "Who were the producers of the movie Paul Blart: Mall Cop? The film was produced for "
         "Happy Madison."});

    fx.records = {q1, q2, q3, q4};
    fx.rag_rules = {
        {"nolan", R"({"domain": "movie", "answer": "Inception"})"},
        {"paul blart", "The producers were several industry veterans, see the references."},
    };
    fx.ft_rules = {
        {"hamburg", "invalid question"},
        {"wta player", "madison keys"},
    };
    return fx;
}

/// Appends salted noise tokens to the query until the measured cosine
/// similarity of the full sentence lands in [lo, hi). Deterministic: the
/// first accepted round wins.
inline std::string sentence_in_band(const honestrag::EmbeddingProvider& provider,
                                    const std::string& query, double lo, double hi,
                                    int noise_count, const std::string& salt) {
    const honestrag::EmbeddingVector qv = provider.embed(query);
    for (int round = 0; round < 4000; ++round) {
        std::string text = query;
        const int extra = noise_count + round / 400;
        for (int t = 0; t < extra; ++t) {
            text += " nz" + salt + "r" + std::to_string(round) + "t" + std::to_string(t);
        }
        const double c = honestrag::cosine_similarity(qv, provider.embed(text));
        if (c >= lo && c < hi) return text;
    }
    throw std::runtime_error("no sentence found in band [" + std::to_string(lo) + ", " +
                             std::to_string(hi) + ") for salt " + salt);
}

/// A noise-only sentence, re-salted until it is safely dissimilar (< 0.5)
/// from the query.
inline std::string background_sentence(const honestrag::EmbeddingProvider& provider,
                                       const std::string& query, const std::string& salt) {
    const honestrag::EmbeddingVector qv = provider.embed(query);
    for (int round = 0; round < 4000; ++round) {
        std::string text;
        for (int t = 0; t < 8; ++t) {
            if (!text.empty()) text += " ";
            text += "nz" + salt + "b" + std::to_string(round) + "t" + std::to_string(t);
        }
        const honestrag::EmbeddingVector sv = provider.embed(text);
        const double c = sv.is_zero() ? 0.0 : honestrag::cosine_similarity(qv, sv);
        if (c < 0.5) return text;
    }
    throw std::runtime_error("no background sentence for salt " + salt);
}

/// 300-question benchmark with per-record retrieval difficulty:
///   [0,60)    false premise, no pages; the fine-tuned rules answer them.
///   [60,100)  comparison, no pages; fine-tuned rules answer them.
///   [100,130) aggregation with yes/no answers, no pages; fine-tuned rules.
///   [130,162) movie, best sentence in [0.82, 0.95): retrieved at both 0.75
///             and 0.8; RAG correct except the last 2 (hallucinations).
///   [162,178) movie, best sentence in [0.755, 0.795): retrieved at 0.75
///             only; RAG correct except the last 1.
///   [178,210) movie, best sentence below 0.70: never retrieved.
///   [210,220) open, page echoes the query: RAG answers a non-movie domain,
///             so the router must fall back.
///   [220,260) open, noise-only pages.
///   [260,300) open, no pages at all.
struct BenchmarkFixture {
    ScriptedFixture fixture;
    int n = 300;
    int ft_correct = 0;         // answered correctly by the fine-tuned rules
    int movie_high_correct = 0;
    int movie_high_wrong = 0;
    int movie_mid_correct = 0;
    int movie_mid_wrong = 0;
};

inline BenchmarkFixture make_benchmark_fixture(const honestrag::EmbeddingProvider& provider) {
    using honestrag::Domain;
    using honestrag::QuestionType;
    using honestrag::Timeliness;

    BenchmarkFixture bench;
    ScriptedFixture& fx = bench.fixture;

    const auto id3 = [](int i) {
        char buf[8];
        std::snprintf(buf, sizeof buf, "%03d", i);
        return std::string(buf);
    };
    const auto make_query = [&](int i) {
        std::string q;
        for (int t = 0; t < 10; ++t) {
            if (!q.empty()) q += " ";
            q += "qz" + id3(i) + "t" + std::to_string(t);
        }
        return q;
    };
    const Domain spread[] = {Domain::open, Domain::sports, Domain::music, Domain::finance};
    const Timeliness ticks[] = {Timeliness::stable, Timeliness::slow_changing,
                                Timeliness::fast_changing, Timeliness::real_time};

    for (int i = 0; i < 300; ++i) {
        honestrag::QueryRecord rec;
        rec.interaction_id = "bench-" + id3(i);
        rec.query = make_query(i);
        rec.timeliness = ticks[i % 4];
        const std::string key = "qz" + id3(i) + "t0";

        if (i < 60) {
            rec.question_type = QuestionType::false_premise;
            rec.domain = spread[i % 4];
            rec.answer = "invalid question";
            fx.ft_rules[key] = "invalid question";
            ++bench.ft_correct;
        } else if (i < 100) {
            rec.question_type = QuestionType::comparison;
            rec.domain = spread[i % 4];
            rec.answer = i % 2 == 0 ? (i % 4 == 0 ? "yes" : "no") : "cmp" + id3(i);
            fx.ft_rules[key] = rec.answer;
            ++bench.ft_correct;
        } else if (i < 130) {
            rec.question_type = QuestionType::aggregation;
            rec.domain = spread[i % 4];
            rec.answer = i % 2 == 0 ? "yes" : "no";
            fx.ft_rules[key] = rec.answer;
            ++bench.ft_correct;
        } else if (i < 162) {
            rec.question_type = QuestionType::simple;
            rec.domain = Domain::movie;
            rec.answer = "moviea" + id3(i);
            const std::string hit =
                sentence_in_band(provider, rec.query, 0.82, 0.95, 3, id3(i));
            const std::string mate1 = background_sentence(provider, rec.query, id3(i) + "x");
            const std::string mate2 = background_sentence(provider, rec.query, id3(i) + "y");
            rec.search_results.push_back({"page " + id3(i), "https://example.test/" + id3(i), "",
                                          hit + ". " + mate1 + ". " + mate2 + "."});
            const bool wrong = i >= 160;  // last 2 of the band hallucinate
            const std::string answer = wrong ? "wrongx" + id3(i) : rec.answer;
            fx.rag_rules[key] = R"({"domain": "movie", "answer": ")" + answer + R"("})";
            if (wrong) {
                ++bench.movie_high_wrong;
            } else {
                ++bench.movie_high_correct;
            }
        } else if (i < 178) {
            rec.question_type = QuestionType::simple;
            rec.domain = Domain::movie;
            rec.answer = "moviea" + id3(i);
            const std::string hit =
                sentence_in_band(provider, rec.query, 0.755, 0.795, 6, id3(i));
            rec.search_results.push_back(
                {"page " + id3(i), "https://example.test/" + id3(i), "", hit});
            const bool wrong = i == 177;  // last 1 of the band hallucinates
            const std::string answer = wrong ? "wrongx" + id3(i) : rec.answer;
            fx.rag_rules[key] = R"({"domain": "movie", "answer": ")" + answer + R"("})";
            if (wrong) {
                ++bench.movie_mid_wrong;
            } else {
                ++bench.movie_mid_correct;
            }
        } else if (i < 210) {
            rec.question_type = QuestionType::simple;
            rec.domain = Domain::movie;
            rec.answer = "moviea" + id3(i);
            const std::string weak =
                sentence_in_band(provider, rec.query, -1.0, 0.70, 12, id3(i));
            const std::string filler = background_sentence(provider, rec.query, id3(i) + "z");
            rec.search_results.push_back({"page " + id3(i), "https://example.test/" + id3(i), "",
                                          weak + ". " + filler + "."});
        } else if (i < 220) {
            rec.question_type = QuestionType::simple;
            rec.domain = Domain::open;
            rec.answer = "openx" + id3(i);
            rec.search_results.push_back(
                {"page " + id3(i), "https://example.test/" + id3(i), "", rec.query});
            fx.rag_rules[key] = R"({"domain": "encyclopedia", "answer": "encx)" + id3(i) + R"("})";
        } else if (i < 260) {
            rec.question_type = QuestionType::simple;
            rec.domain = Domain::open;
            rec.answer = "openx" + id3(i);
            rec.search_results.push_back({"page " + id3(i), "https://example.test/" + id3(i), "",
                                          background_sentence(provider, rec.query, id3(i) + "n")});
        } else {
            rec.question_type = QuestionType::simple;
            rec.domain = Domain::open;
            rec.answer = "openx" + id3(i);
        }
        fx.records.push_back(std::move(rec));
    }
    return bench;
}

/// Serializes scripted-backend rules in the CLI's script-file format.
inline void write_script_file(const ScriptedFixture& fx, const std::filesystem::path& path) {
    nlohmann::ordered_json j;
    j["rag"]["default"] = fx.rag_default;
    j["rag"]["rules"] = fx.rag_rules;
    j["finetuned"]["default"] = fx.ft_default;
    j["finetuned"]["rules"] = fx.ft_rules;
    std::ofstream out(path);
    out << j.dump(2) << '\n';
}

}  // namespace testsupport
