#pragma once

#include <algorithm>
#include <cstddef>
#include <iomanip>
#include <map>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "honestrag/errors.hpp"
#include "honestrag/gateway.hpp"
#include "honestrag/text.hpp"
#include "honestrag/types.hpp"

namespace honestrag {

enum class VerdictOutcome { perfect, acceptable, missing, incorrect };

inline std::string_view to_string(VerdictOutcome o) {
    switch (o) {
        case VerdictOutcome::perfect: return "perfect";
        case VerdictOutcome::acceptable: return "acceptable";
        case VerdictOutcome::missing: return "missing";
        case VerdictOutcome::incorrect: return "incorrect";
    }
    return "incorrect";
}

/// Per-question scoring result. `points` carries the half-credit scheme
/// (perfect 1, acceptable 0.5, missing 0, incorrect -1); the full-weight
/// aggregation mode re-derives points from the outcome instead.
struct Verdict {
    std::string interaction_id;
    VerdictOutcome outcome = VerdictOutcome::missing;
    double points = 0.0;
    bool exact = false;
};

enum class ScoringMode { crag_half, full_weight };

inline std::string_view to_string(ScoringMode m) {
    return m == ScoringMode::crag_half ? "crag_half" : "full_weight";
}

namespace detail {

inline bool tokens_contained(const std::string& needle, const std::string& haystack) {
    const std::vector<std::string> want = text::whitespace_tokens(needle);
    if (want.empty()) return false;
    const std::vector<std::string> have = text::whitespace_tokens(haystack);
    for (const std::string& token : want) {
        if (std::find(have.begin(), have.end(), token) == have.end()) return false;
    }
    return true;
}

}  // namespace detail

/// Grades a prediction against the ground truth:
///   - an "i don't know" prediction is missing (0 points);
///   - exact normalized equality with the truth is perfect (exact=true);
///   - equality with an alternate answer, or containment of every
///     whitespace token of the truth (or of an alternate) in the
///     prediction, is acceptable;
///   - anything else is incorrect.
inline Verdict judge(std::string_view prediction, std::string_view truth,
                     const std::vector<std::string>& alt_answers = {},
                     std::string interaction_id = "") {
    const std::string pred = text::normalize_answer(prediction);
    const std::string want = text::normalize_answer(truth);

    Verdict v;
    v.interaction_id = std::move(interaction_id);
    if (classify_answer(pred) == AnswerClass::i_dont_know) {
        v.outcome = VerdictOutcome::missing;
        v.points = 0.0;
        return v;
    }
    if (pred == want) {
        v.outcome = VerdictOutcome::perfect;
        v.points = 1.0;
        v.exact = true;
        return v;
    }
    bool acceptable = detail::tokens_contained(want, pred);
    for (const std::string& alt : alt_answers) {
        if (acceptable) break;
        const std::string a = text::normalize_answer(alt);
        acceptable = pred == a || detail::tokens_contained(a, pred);
    }
    if (acceptable) {
        v.outcome = VerdictOutcome::acceptable;
        v.points = 0.5;
        return v;
    }
    v.outcome = VerdictOutcome::incorrect;
    v.points = -1.0;
    return v;
}

/// One row of metrics in the published column order.
struct MetricRow {
    double exact_accuracy = 0.0;
    double accuracy = 0.0;
    double hallucination = 0.0;
    double missing = 0.0;
    double total_score = 0.0;
    std::size_t n = 0;
};

struct Scorecard {
    MetricRow micro;
    std::map<Domain, MetricRow> per_domain;
    /// Unweighted mean of per-domain total_score — the headline number.
    double macro_total_score = 0.0;
    ScoringMode mode = ScoringMode::full_weight;
};

namespace detail {

struct OutcomeCounts {
    std::size_t exact = 0;
    std::size_t perfect = 0;
    std::size_t acceptable = 0;
    std::size_t missing = 0;
    std::size_t incorrect = 0;
    std::size_t n = 0;

    void add(const Verdict& v) {
        ++n;
        if (v.exact) ++exact;
        switch (v.outcome) {
            case VerdictOutcome::perfect: ++perfect; break;
            case VerdictOutcome::acceptable: ++acceptable; break;
            case VerdictOutcome::missing: ++missing; break;
            case VerdictOutcome::incorrect: ++incorrect; break;
        }
    }

    MetricRow row(ScoringMode mode) const {
        MetricRow r;
        r.n = n;
        if (n == 0) return r;
        const auto dn = static_cast<double>(n);
        const double acceptable_weight = mode == ScoringMode::full_weight ? 1.0 : 0.5;
        const double credit = static_cast<double>(perfect) +
                              acceptable_weight * static_cast<double>(acceptable);
        r.exact_accuracy = static_cast<double>(exact) / dn;
        r.accuracy = credit / dn;
        r.hallucination = static_cast<double>(incorrect) / dn;
        r.missing = static_cast<double>(missing) / dn;
        r.total_score = (credit - static_cast<double>(incorrect)) / dn;
        return r;
    }
};

}  // namespace detail

/// Aggregates verdicts into micro metrics, per-domain rows, and the
/// macro-average total. Counting-based, so the result is independent of
/// verdict order.
inline Scorecard score_batch(const std::vector<std::pair<Verdict, Domain>>& verdicts,
                             ScoringMode mode = ScoringMode::full_weight) {
    if (verdicts.empty()) throw EmptyBatch("score_batch: no verdicts");
    detail::OutcomeCounts micro;
    std::map<Domain, detail::OutcomeCounts> domains;
    for (const auto& [verdict, domain] : verdicts) {
        micro.add(verdict);
        domains[domain].add(verdict);
    }
    Scorecard card;
    card.mode = mode;
    card.micro = micro.row(mode);
    double macro_sum = 0.0;
    for (const auto& [domain, counts] : domains) {
        card.per_domain[domain] = counts.row(mode);
        macro_sum += card.per_domain[domain].total_score;
    }
    card.macro_total_score = macro_sum / static_cast<double>(domains.size());
    return card;
}

/// Plain-text table in the published column order: Exact Accuracy,
/// Accuracy, Hallucination, Missing, Total Score.
inline std::string render_scorecard_text(const Scorecard& card) {
    std::ostringstream out;
    out << std::fixed << std::setprecision(3);
    auto row = [&](std::string_view label, const MetricRow& r) {
        out << std::left << std::setw(12) << label << std::right;
        out << std::setw(10) << r.exact_accuracy << std::setw(10) << r.accuracy << std::setw(14)
            << r.hallucination << std::setw(9) << r.missing << std::setw(13) << r.total_score
            << std::setw(7) << r.n << '\n';
    };
    out << std::left << std::setw(12) << "scope" << std::right << std::setw(10) << "exact_acc"
        << std::setw(10) << "accuracy" << std::setw(14) << "hallucination" << std::setw(9)
        << "missing" << std::setw(13) << "total_score" << std::setw(7) << "n" << '\n';
    row("micro", card.micro);
    for (const auto& [domain, metrics] : card.per_domain) row(to_string(domain), metrics);
    out << std::left << std::setw(12) << "macro" << std::right << std::setw(10) << "-"
        << std::setw(10) << "-" << std::setw(14) << "-" << std::setw(9) << "-" << std::setw(13)
        << card.macro_total_score << std::setw(7) << "-" << '\n';
    out << "mode: " << to_string(card.mode) << '\n';
    return out.str();
}

inline nlohmann::ordered_json scorecard_to_json(const Scorecard& card) {
    auto row = [](const MetricRow& r) {
        nlohmann::ordered_json j;
        j["exact_accuracy"] = r.exact_accuracy;
        j["accuracy"] = r.accuracy;
        j["hallucination"] = r.hallucination;
        j["missing"] = r.missing;
        j["total_score"] = r.total_score;
        j["n"] = r.n;
        return j;
    };
    nlohmann::ordered_json j;
    j["mode"] = std::string(to_string(card.mode));
    j["micro"] = row(card.micro);
    nlohmann::ordered_json domains;
    for (const auto& [domain, metrics] : card.per_domain) {
        domains[std::string(to_string(domain))] = row(metrics);
    }
    j["per_domain"] = std::move(domains);
    j["macro_total_score"] = card.macro_total_score;
    return j;
}

/// Inverse of scorecard_to_json; round-trips every field.
inline Scorecard scorecard_from_json(const nlohmann::json& j) {
    auto row = [](const nlohmann::json& r) {
        MetricRow m;
        m.exact_accuracy = r.at("exact_accuracy").get<double>();
        m.accuracy = r.at("accuracy").get<double>();
        m.hallucination = r.at("hallucination").get<double>();
        m.missing = r.at("missing").get<double>();
        m.total_score = r.at("total_score").get<double>();
        m.n = r.at("n").get<std::size_t>();
        return m;
    };
    Scorecard card;
    card.mode = j.at("mode").get<std::string>() == "crag_half" ? ScoringMode::crag_half
                                                               : ScoringMode::full_weight;
    card.micro = row(j.at("micro"));
    for (const auto& item : j.at("per_domain").items()) {
        if (auto domain = parse_domain(item.key())) {
            card.per_domain[*domain] = row(item.value());
        }
    }
    card.macro_total_score = j.at("macro_total_score").get<double>();
    return card;
}

}  // namespace honestrag
