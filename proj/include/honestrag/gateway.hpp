#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>

#include <json.hpp>

#include "honestrag/errors.hpp"
#include "honestrag/text.hpp"
#include "honestrag/types.hpp"

namespace honestrag {

/// Opaque decoding knobs passed through to the backend.
struct DecodeParams {
    double temperature = 0.0;
    int max_tokens = 512;
};

/// Chat-completion backend. complete() is total: failures surface as
/// exceptions (BackendFailure), never as empty-string success. Must be safe
/// for concurrent calls.
class ChatBackend {
public:
    virtual ~ChatBackend() = default;
    virtual std::string name() const = 0;
    virtual std::string complete(std::string_view system_text, std::string_view user_text,
                                 const DecodeParams& params) const = 0;
};

struct StructuredAnswer {
    AnswerDomain domain = AnswerDomain::other;
    std::string answer;  // normalized

    bool operator==(const StructuredAnswer&) const = default;
};

/// One model call. parsed/parse_error are mutually exclusive once extraction
/// has been attempted; plain-text calls (the fine-tuned model path) carry
/// neither.
struct ModelExchange {
    std::string prompt;
    std::string raw_output;
    std::optional<StructuredAnswer> parsed;
    std::optional<std::string> parse_error;
};

/// RAG prompt template, version 1. Byte-identical to
/// data/prompts/rag_prompt_v1.txt (a test pins the two in sync); note the
/// intentional trailing spaces after "result json." and "### References",
/// and the U+2019 apostrophes.
inline constexpr char kRagPromptTemplate[] =
    "You are an agent that only outputs JSON. You are given a\n"
    "Query and References. Do the following:\n"
    "\n"
    "1. Determine the domain the query is about. The domain should be one of the following:\n"
    "\"finance\", \"sports\", \"music\", \"movie\", \"encyclopedia\". If none of the domains apply, "
    "use \"other\". Use \"domain\" as the key in the result json. \n"
    "\n"
    "2. Answer the question in as few words as possible. Please follow these guidelines when "
    "formulating your answer.\n"
    "If the question contains a false premise or assumption, answer \"invalid question\".\n"
    "If you are uncertain or don\xe2\x80\x99t know the answer, respond with \"I don\xe2\x80\x99t "
    "know\". Use \"answer\" as the key in the result json.\n"
    "\n"
    "\n"
    "### Question\n"
    "{query}\n"
    "\n"
    "### References \n"
    "{references}\n"
    "\n"
    "### Answer\n";

/// Substitutes {query} and {references} into the template. Substitution is
/// positional and literal: each placeholder is replaced exactly once and
/// braces inside the values are preserved.
inline std::string render_rag_prompt(std::string_view query, std::string_view references) {
    constexpr std::string_view tpl = kRagPromptTemplate;
    constexpr std::string_view query_slot = "{query}";
    constexpr std::string_view refs_slot = "{references}";
    const std::size_t qpos = tpl.find(query_slot);
    const std::size_t rpos = tpl.find(refs_slot, qpos + query_slot.size());
    std::string out;
    out.reserve(tpl.size() + query.size() + references.size());
    out.append(tpl.substr(0, qpos));
    out.append(query);
    out.append(tpl.substr(qpos + query_slot.size(), rpos - (qpos + query_slot.size())));
    out.append(references);
    out.append(tpl.substr(rpos + refs_slot.size()));
    return out;
}

namespace detail {
// Span [l, r] of the balanced object starting at the first '{', honoring
// string literals and backslash escapes. nullopt when no '{' exists or the
// first one never balances.
inline std::optional<std::pair<std::size_t, std::size_t>> first_balanced_object(
    std::string_view raw) {
    const std::size_t open = raw.find('{');
    if (open == std::string_view::npos) return std::nullopt;
    int depth = 0;
    bool in_string = false;
    bool escaped = false;
    for (std::size_t i = open; i < raw.size(); ++i) {
        const char c = raw[i];
        if (in_string) {
            if (escaped) {
                escaped = false;
            } else if (c == '\\') {
                escaped = true;
            } else if (c == '"') {
                in_string = false;
            }
            continue;
        }
        if (c == '"') {
            in_string = true;
        } else if (c == '{') {
            ++depth;
        } else if (c == '}') {
            --depth;
            if (depth == 0) return std::make_pair(open, i);
        }
    }
    return std::nullopt;
}
}  // namespace detail

/// Pulls the first balanced JSON object out of free-form model output and
/// validates it as {domain, answer}. Unknown domain strings degrade to
/// AnswerDomain::other, reporting the original value through `warning` when
/// provided. The answer comes back normalized.
inline StructuredAnswer extract_first_json(std::string_view raw, std::string* warning = nullptr) {
    const auto span = detail::first_balanced_object(raw);
    if (!span) throw NoObjectFound("no balanced JSON object in model output");
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(raw.substr(span->first, span->second - span->first + 1));
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseFailure(e.what());
    }
    if (!j.is_object()) throw ParseFailure("first JSON value is not an object");
    if (!j.contains("domain") || !j.at("domain").is_string()) {
        throw SchemaFailure("missing string key \"domain\"");
    }
    if (!j.contains("answer") || !j.at("answer").is_string()) {
        throw SchemaFailure("missing string key \"answer\"");
    }
    StructuredAnswer out;
    const std::string raw_domain = j.at("domain").get<std::string>();
    if (auto domain = parse_answer_domain(text::normalize_answer(raw_domain))) {
        out.domain = *domain;
    } else {
        out.domain = AnswerDomain::other;
        if (warning != nullptr) {
            *warning = "unknown domain \"" + raw_domain + "\" mapped to \"other\"";
        }
    }
    out.answer = text::normalize_answer(j.at("answer").get<std::string>());
    if (out.answer.empty()) throw SchemaFailure("answer empty after normalization");
    return out;
}

enum class AnswerClass { invalid_question, i_dont_know, substantive };

/// Classifies an answer string after normalization, so apostrophe variants
/// and trailing periods do not matter. Idempotent under re-normalization.
inline AnswerClass classify_answer(std::string_view answer) {
    const std::string norm = text::normalize_answer(answer);
    if (norm == "invalid question") return AnswerClass::invalid_question;
    if (norm == "i don't know") return AnswerClass::i_dont_know;
    return AnswerClass::substantive;
}

/// Deterministic test double: replies with the output of the longest script
/// key found as a substring of the user text (ties broken by lexicographic
/// order), or with a fixed default.
class ScriptedBackend : public ChatBackend {
public:
    ScriptedBackend(std::map<std::string, std::string> rules, std::string default_output,
                    std::string name = "scripted")
        : rules_(std::move(rules)),
          default_output_(std::move(default_output)),
          name_(std::move(name)) {}

    std::string name() const override { return name_; }

    std::string complete(std::string_view /*system_text*/, std::string_view user_text,
                         const DecodeParams& /*params*/) const override {
        const std::string* best = nullptr;
        std::size_t best_len = 0;
        for (const auto& [key, output] : rules_) {
            if (key.empty() || user_text.find(key) == std::string_view::npos) continue;
            if (best == nullptr || key.size() > best_len) {
                best = &output;
                best_len = key.size();
            }
        }
        return best != nullptr ? *best : default_output_;
    }

private:
    std::map<std::string, std::string> rules_;
    std::string default_output_;
    std::string name_;
};

}  // namespace honestrag
