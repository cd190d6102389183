#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

namespace honestrag {

enum class QuestionType {
    simple,
    simple_w_condition,
    comparison,
    aggregation,
    set,
    false_premise,
    post_processing,
    multi_hop,
};

/// Benchmark question domain.
enum class Domain { finance, sports, music, movie, open };

enum class Timeliness { real_time, fast_changing, slow_changing, stable };

/// Domain emitted by the structured model answer; wider than Domain because
/// the prompt offers "encyclopedia" and "other".
enum class AnswerDomain { finance, sports, music, movie, encyclopedia, other };

namespace detail {
// Canonical enum spelling uses underscores; hyphenated input is accepted.
inline std::string canonical_token(std::string_view s) {
    std::string out(s);
    for (char& c : out) {
        if (c == '-') c = '_';
    }
    return out;
}
}  // namespace detail

inline std::string_view to_string(QuestionType t) {
    switch (t) {
        case QuestionType::simple: return "simple";
        case QuestionType::simple_w_condition: return "simple_w_condition";
        case QuestionType::comparison: return "comparison";
        case QuestionType::aggregation: return "aggregation";
        case QuestionType::set: return "set";
        case QuestionType::false_premise: return "false_premise";
        case QuestionType::post_processing: return "post_processing";
        case QuestionType::multi_hop: return "multi_hop";
    }
    return "simple";
}

inline std::optional<QuestionType> parse_question_type(std::string_view s) {
    const std::string c = detail::canonical_token(s);
    if (c == "simple") return QuestionType::simple;
    if (c == "simple_w_condition") return QuestionType::simple_w_condition;
    if (c == "comparison") return QuestionType::comparison;
    if (c == "aggregation") return QuestionType::aggregation;
    if (c == "set") return QuestionType::set;
    if (c == "false_premise") return QuestionType::false_premise;
    if (c == "post_processing") return QuestionType::post_processing;
    if (c == "multi_hop") return QuestionType::multi_hop;
    return std::nullopt;
}

inline std::string_view to_string(Domain d) {
    switch (d) {
        case Domain::finance: return "finance";
        case Domain::sports: return "sports";
        case Domain::music: return "music";
        case Domain::movie: return "movie";
        case Domain::open: return "open";
    }
    return "open";
}

inline std::optional<Domain> parse_domain(std::string_view s) {
    const std::string c = detail::canonical_token(s);
    if (c == "finance") return Domain::finance;
    if (c == "sports") return Domain::sports;
    if (c == "music") return Domain::music;
    if (c == "movie") return Domain::movie;
    if (c == "open") return Domain::open;
    return std::nullopt;
}

inline std::string_view to_string(Timeliness t) {
    switch (t) {
        case Timeliness::real_time: return "real_time";
        case Timeliness::fast_changing: return "fast_changing";
        case Timeliness::slow_changing: return "slow_changing";
        case Timeliness::stable: return "stable";
    }
    return "stable";
}

inline std::optional<Timeliness> parse_timeliness(std::string_view s) {
    const std::string c = detail::canonical_token(s);
    if (c == "real_time") return Timeliness::real_time;
    if (c == "fast_changing") return Timeliness::fast_changing;
    if (c == "slow_changing") return Timeliness::slow_changing;
    if (c == "stable") return Timeliness::stable;
    return std::nullopt;
}

inline std::string_view to_string(AnswerDomain d) {
    switch (d) {
        case AnswerDomain::finance: return "finance";
        case AnswerDomain::sports: return "sports";
        case AnswerDomain::music: return "music";
        case AnswerDomain::movie: return "movie";
        case AnswerDomain::encyclopedia: return "encyclopedia";
        case AnswerDomain::other: return "other";
    }
    return "other";
}

inline std::optional<AnswerDomain> parse_answer_domain(std::string_view s) {
    const std::string c = detail::canonical_token(s);
    if (c == "finance") return AnswerDomain::finance;
    if (c == "sports") return AnswerDomain::sports;
    if (c == "music") return AnswerDomain::music;
    if (c == "movie") return AnswerDomain::movie;
    if (c == "encyclopedia") return AnswerDomain::encyclopedia;
    if (c == "other") return AnswerDomain::other;
    return std::nullopt;
}

/// One mock web-search hit. page_result is the full page text and may be
/// empty; page_snippet then stands in for it during segmentation.
struct SearchResult {
    std::string page_name;
    std::string page_url;
    std::string page_snippet;
    std::string page_result;

    bool operator==(const SearchResult&) const = default;
};

/// One benchmark question. `answer` and `alt_answers` are stored normalized
/// (see text::normalize_answer); `query` is kept verbatim.
struct QueryRecord {
    std::string interaction_id;
    std::string query;
    std::string answer;
    std::vector<std::string> alt_answers;
    QuestionType question_type = QuestionType::simple;
    Domain domain = Domain::open;
    Timeliness timeliness = Timeliness::stable;
    std::vector<SearchResult> search_results;

    bool operator==(const QueryRecord&) const = default;
};

/// A segmented sentence, addressable by (document, paragraph, sentence).
struct SentenceUnit {
    int doc_index = 0;
    int para_index = 0;
    int sent_index = 0;
    std::string text;

    std::tuple<int, int, int> key() const { return {doc_index, para_index, sent_index}; }

    bool operator==(const SentenceUnit&) const = default;
};

}  // namespace honestrag
