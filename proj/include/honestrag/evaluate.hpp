#pragma once

#include <filesystem>
#include <fstream>
#include <ostream>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include <json.hpp>

#include "honestrag/corpus.hpp"
#include "honestrag/errors.hpp"
#include "honestrag/router.hpp"
#include "honestrag/scorer.hpp"

namespace honestrag {

/// Line-delimited persisted form of a RoutingOutcome, carrying what the
/// scorer and report need.
struct OutcomeRecord {
    std::string interaction_id;
    std::string final_answer;
    Branch branch = Branch::fallback_finetuned;
    std::string rag_domain;  // empty when the RAG model was not consulted/parsed
    std::size_t rag_raw_len = 0;
    int seeds_passing_threshold = 0;
    std::string error_note;
};

inline OutcomeRecord to_outcome_record(const RoutingOutcome& outcome) {
    OutcomeRecord rec;
    rec.interaction_id = outcome.interaction_id;
    rec.final_answer = outcome.final_answer;
    rec.branch = outcome.branch;
    if (outcome.rag_exchange) {
        rec.rag_raw_len = outcome.rag_exchange->raw_output.size();
        if (outcome.rag_exchange->parsed) {
            rec.rag_domain = std::string(to_string(outcome.rag_exchange->parsed->domain));
        }
    }
    if (outcome.pruned) rec.seeds_passing_threshold = outcome.pruned->seeds_passing_threshold;
    rec.error_note = outcome.error_note;
    return rec;
}

inline void write_outcomes(const std::vector<RoutingOutcome>& outcomes,
                           const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw IoFailure("cannot write outcomes: " + path.string());
    for (const RoutingOutcome& outcome : outcomes) {
        const OutcomeRecord rec = to_outcome_record(outcome);
        nlohmann::ordered_json j;
        j["interaction_id"] = rec.interaction_id;
        j["final_answer"] = rec.final_answer;
        j["branch"] = std::string(to_string(rec.branch));
        j["rag_domain"] = rec.rag_domain;
        j["rag_raw_len"] = rec.rag_raw_len;
        j["seeds_passing_threshold"] = rec.seeds_passing_threshold;
        j["error_note"] = rec.error_note;
        out << j.dump() << '\n';
    }
    if (!out) throw IoFailure("failed while writing outcomes: " + path.string());
}

inline std::vector<OutcomeRecord> read_outcomes(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoFailure("cannot open outcomes: " + path.string());
    std::vector<OutcomeRecord> records;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (text::trim(line).empty()) continue;
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(line);
        } catch (const nlohmann::json::parse_error& e) {
            throw MalformedLine(line_no, e.what());
        }
        OutcomeRecord rec;
        rec.interaction_id = detail::require_string(j, "interaction_id", line_no);
        if (!j.contains("final_answer") || !j.at("final_answer").is_string()) {
            throw MissingField(line_no, "final_answer");
        }
        rec.final_answer = j.at("final_answer").get<std::string>();
        const std::string branch = detail::require_string(j, "branch", line_no);
        if (auto parsed = parse_branch(branch)) {
            rec.branch = *parsed;
        } else {
            throw UnknownEnumValue(line_no, "branch", branch);
        }
        if (j.contains("rag_domain") && j.at("rag_domain").is_string()) {
            rec.rag_domain = j.at("rag_domain").get<std::string>();
        }
        if (j.contains("rag_raw_len") && j.at("rag_raw_len").is_number_unsigned()) {
            rec.rag_raw_len = j.at("rag_raw_len").get<std::size_t>();
        }
        if (j.contains("seeds_passing_threshold") &&
            j.at("seeds_passing_threshold").is_number_integer()) {
            rec.seeds_passing_threshold = j.at("seeds_passing_threshold").get<int>();
        }
        if (j.contains("error_note") && j.at("error_note").is_string()) {
            rec.error_note = j.at("error_note").get<std::string>();
        }
        records.push_back(std::move(rec));
    }
    return records;
}

struct JoinedVerdicts {
    std::vector<std::pair<Verdict, Domain>> verdicts;
    std::vector<std::string> unjoinable_ids;
};

/// Joins persisted outcomes to their ground-truth records by interaction_id
/// and judges each. Outcomes with no matching record are skipped and
/// reported (warned about when a sink is given), never fatal here.
inline JoinedVerdicts join_and_judge(const std::vector<OutcomeRecord>& outcomes,
                                     const std::vector<QueryRecord>& records,
                                     std::ostream* warnings = nullptr) {
    std::unordered_map<std::string, const QueryRecord*> by_id;
    by_id.reserve(records.size());
    for (const QueryRecord& rec : records) by_id[rec.interaction_id] = &rec;

    JoinedVerdicts joined;
    for (const OutcomeRecord& outcome : outcomes) {
        const auto it = by_id.find(outcome.interaction_id);
        if (it == by_id.end()) {
            joined.unjoinable_ids.push_back(outcome.interaction_id);
            detail::warn(warnings, "no ground truth for interaction_id \"" +
                                       outcome.interaction_id + "\"; skipped");
            continue;
        }
        const QueryRecord& truth = *it->second;
        joined.verdicts.emplace_back(
            judge(outcome.final_answer, truth.answer, truth.alt_answers, truth.interaction_id),
            truth.domain);
    }
    return joined;
}

inline void write_report(const Scorecard& card, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw IoFailure("cannot write report: " + path.string());
    out << scorecard_to_json(card).dump(2) << '\n';
    if (!out) throw IoFailure("failed while writing report: " + path.string());
}

}  // namespace honestrag
