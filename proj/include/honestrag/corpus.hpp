#pragma once

#include <cctype>
#include <filesystem>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include <json.hpp>

#include "honestrag/errors.hpp"
#include "honestrag/text.hpp"
#include "honestrag/types.hpp"

namespace honestrag {

/// Tokens (lowercase, trailing period included) whose period never ends a
/// sentence. Mirrors data/abbreviations.txt version 1; a test pins the two
/// in sync.
inline const std::vector<std::string>& default_abbreviations() {
    static const std::vector<std::string> kList = {
        "mr.",   "mrs.",  "ms.",   "dr.",   "prof.",   "sr.",   "jr.",  "st.",  "mt.",
        "capt.", "gen.",  "sgt.",  "col.",  "etc.",    "vs.",   "e.g.", "i.e.", "cf.",
        "fig.",  "no.",   "inc.",  "ltd.",  "co.",     "corp.", "dept.", "est.",
        "approx.", "jan.", "feb.", "mar.",  "apr.",    "jun.",  "jul.", "aug.", "sep.",
        "sept.", "oct.",  "nov.",  "dec.",  "u.s.",    "u.k.",  "a.m.", "p.m.",
    };
    return kList;
}

/// Reads a guard list file: one token per line, '#' comments and blank lines
/// skipped, tokens lowercased.
inline std::vector<std::string> load_abbreviations(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoFailure("cannot open abbreviation list: " + path.string());
    std::vector<std::string> out;
    std::string line;
    while (std::getline(in, line)) {
        std::string_view t = text::trim(line);
        if (t.empty() || t.front() == '#') continue;
        std::string token(t);
        for (char& c : token) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
        out.push_back(std::move(token));
    }
    return out;
}

/// Deterministic rule-based segmentation: paragraphs are maximal
/// blank-line-delimited blocks; sentences end at '.', '!' or '?' followed by
/// whitespace (or end of text), unless the dotted token is on the guard list.
class SentenceSegmenter {
public:
    explicit SentenceSegmenter(std::vector<std::string> abbreviations = default_abbreviations())
        : guard_(abbreviations.begin(), abbreviations.end()) {}

    std::vector<std::string> split_sentences(std::string_view paragraph) const {
        std::vector<std::string> out;
        std::size_t start = 0;
        for (std::size_t i = 0; i < paragraph.size(); ++i) {
            const char c = paragraph[i];
            if (c != '.' && c != '!' && c != '?') continue;
            const bool at_end = i + 1 == paragraph.size();
            if (!at_end && !text::is_space(paragraph[i + 1])) continue;
            if (c == '.' && guarded_at(paragraph, i)) continue;
            flush(paragraph.substr(start, i - start + 1), out);
            start = i + 1;
        }
        flush(paragraph.substr(start), out);
        return out;
    }

    std::vector<SentenceUnit> segment(const SearchResult& doc, int doc_index = 0) const {
        // Full page text preferred; the snippet stands in when it is absent.
        const std::string& source = doc.page_result.empty() ? doc.page_snippet : doc.page_result;
        std::vector<SentenceUnit> units;
        int para_index = 0;
        for (const std::string& paragraph : split_paragraphs(source)) {
            int sent_index = 0;
            for (std::string& sentence : split_sentences(paragraph)) {
                units.push_back({doc_index, para_index, sent_index++, std::move(sentence)});
            }
            if (sent_index > 0) ++para_index;
        }
        return units;
    }

    std::vector<SentenceUnit> segment_all(const std::vector<SearchResult>& docs) const {
        std::vector<SentenceUnit> units;
        for (std::size_t d = 0; d < docs.size(); ++d) {
            auto doc_units = segment(docs[d], static_cast<int>(d));
            units.insert(units.end(), std::make_move_iterator(doc_units.begin()),
                         std::make_move_iterator(doc_units.end()));
        }
        return units;
    }

private:
    static std::vector<std::string> split_paragraphs(std::string_view source) {
        std::vector<std::string> paras;
        std::string current;
        std::size_t pos = 0;
        auto flush_para = [&] {
            if (!text::trim(current).empty()) paras.push_back(current);
            current.clear();
        };
        while (pos <= source.size()) {
            std::size_t nl = source.find('\n', pos);
            std::string_view line =
                source.substr(pos, nl == std::string_view::npos ? nl : nl - pos);
            if (text::trim(line).empty()) {
                flush_para();
            } else {
                if (!current.empty()) current.push_back(' ');
                current.append(line);
            }
            if (nl == std::string_view::npos) break;
            pos = nl + 1;
        }
        flush_para();
        return paras;
    }

    // True when the token ending with the period at `dot` is a guarded
    // abbreviation ("Dr.", "e.g.", ...). Leading punctuation like '(' is
    // ignored so "(e.g. x)" stays guarded.
    bool guarded_at(std::string_view paragraph, std::size_t dot) const {
        std::size_t begin = dot;
        while (begin > 0 && !text::is_space(paragraph[begin - 1])) --begin;
        while (begin < dot && !std::isalnum(static_cast<unsigned char>(paragraph[begin]))) ++begin;
        std::string token(paragraph.substr(begin, dot - begin + 1));
        for (char& c : token) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
        return guard_.count(token) > 0;
    }

    static void flush(std::string_view span, std::vector<std::string>& out) {
        std::string_view t = text::trim(span);
        if (!t.empty()) out.emplace_back(t);
    }

    std::unordered_set<std::string> guard_;
};

enum class ParseMode { strict, lenient };

namespace detail {

inline void warn(std::ostream* warnings, const std::string& message) {
    if (warnings != nullptr) *warnings << "warning: " << message << '\n';
}

inline std::string require_string(const nlohmann::json& j, const char* name, int line_no) {
    if (!j.contains(name)) throw MissingField(line_no, name);
    const auto& v = j.at(name);
    if (!v.is_string()) throw MalformedLine(line_no, std::string(name) + " is not a string");
    std::string s = v.get<std::string>();
    if (text::trim(s).empty()) throw MissingField(line_no, name);
    return s;
}

inline void check_keys(const nlohmann::json& j, const std::unordered_set<std::string>& known,
                       ParseMode mode, int line_no, std::ostream* warnings) {
    for (const auto& item : j.items()) {
        if (known.count(item.key()) > 0) continue;
        if (mode == ParseMode::strict) {
            throw MalformedLine(line_no, "unknown key \"" + item.key() + "\"");
        }
        warn(warnings, "line " + std::to_string(line_no) + ": ignoring unknown key \"" +
                           item.key() + "\"");
    }
}

inline QueryRecord parse_record(const nlohmann::json& j, ParseMode mode, int line_no,
                                std::ostream* warnings) {
    static const std::unordered_set<std::string> kKnown = {
        "interaction_id", "query",  "answer",     "alt_answers",
        "question_type",  "domain", "timeliness", "search_results",
    };
    static const std::unordered_set<std::string> kKnownResult = {
        "page_name", "page_url", "page_snippet", "page_result"};
    if (!j.is_object()) throw MalformedLine(line_no, "record is not an object");
    check_keys(j, kKnown, mode, line_no, warnings);

    QueryRecord rec;
    rec.interaction_id = require_string(j, "interaction_id", line_no);
    rec.query = require_string(j, "query", line_no);
    rec.answer = text::normalize_answer(require_string(j, "answer", line_no));
    if (rec.answer.empty()) throw MalformedLine(line_no, "answer empty after normalization");

    if (j.contains("alt_answers")) {
        const auto& alts = j.at("alt_answers");
        if (!alts.is_array()) throw MalformedLine(line_no, "alt_answers is not an array");
        for (const auto& a : alts) {
            if (!a.is_string()) throw MalformedLine(line_no, "alt_answers entry is not a string");
            std::string norm = text::normalize_answer(a.get<std::string>());
            if (!norm.empty()) rec.alt_answers.push_back(std::move(norm));
        }
    }

    const std::string qt = require_string(j, "question_type", line_no);
    if (auto parsed = parse_question_type(qt)) {
        rec.question_type = *parsed;
    } else {
        throw UnknownEnumValue(line_no, "question_type", qt);
    }
    const std::string dom = require_string(j, "domain", line_no);
    if (auto parsed = parse_domain(dom)) {
        rec.domain = *parsed;
    } else {
        throw UnknownEnumValue(line_no, "domain", dom);
    }
    const std::string tl = require_string(j, "timeliness", line_no);
    if (auto parsed = parse_timeliness(tl)) {
        rec.timeliness = *parsed;
    } else {
        throw UnknownEnumValue(line_no, "timeliness", tl);
    }

    if (rec.question_type == QuestionType::false_premise && rec.answer != "invalid question") {
        throw MalformedLine(line_no, "false_premise record must have answer \"invalid question\"");
    }

    if (!j.contains("search_results")) throw MissingField(line_no, "search_results");
    const auto& results = j.at("search_results");
    if (!results.is_array()) throw MalformedLine(line_no, "search_results is not an array");
    for (const auto& r : results) {
        if (!r.is_object()) throw MalformedLine(line_no, "search_results entry is not an object");
        check_keys(r, kKnownResult, mode, line_no, warnings);
        SearchResult sr;
        sr.page_url = require_string(r, "page_url", line_no);
        auto optional_string = [&](const char* name) -> std::string {
            if (!r.contains(name)) return {};
            const auto& v = r.at(name);
            if (!v.is_string()) {
                throw MalformedLine(line_no, std::string(name) + " is not a string");
            }
            return v.get<std::string>();
        };
        sr.page_name = optional_string("page_name");
        sr.page_snippet = optional_string("page_snippet");
        sr.page_result = optional_string("page_result");
        rec.search_results.push_back(std::move(sr));
    }
    return rec;
}

}  // namespace detail

/// Parses a line-delimited fixture stream. Strict mode rejects blank lines
/// and unknown keys; lenient mode skips/ignores them with a warning.
inline std::vector<QueryRecord> parse_dataset(std::istream& in, ParseMode mode = ParseMode::strict,
                                              std::ostream* warnings = nullptr) {
    std::vector<QueryRecord> records;
    std::unordered_set<std::string> seen_ids;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (text::trim(line).empty()) {
            if (mode == ParseMode::strict) throw MalformedLine(line_no, "blank line");
            detail::warn(warnings, "line " + std::to_string(line_no) + ": skipping blank line");
            continue;
        }
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(line);
        } catch (const nlohmann::json::parse_error& e) {
            throw MalformedLine(line_no, e.what());
        }
        QueryRecord rec = detail::parse_record(j, mode, line_no, warnings);
        if (!seen_ids.insert(rec.interaction_id).second) {
            throw MalformedLine(line_no,
                                "duplicate interaction_id \"" + rec.interaction_id + "\"");
        }
        records.push_back(std::move(rec));
    }
    return records;
}

inline std::vector<QueryRecord> load_dataset(const std::filesystem::path& path,
                                             ParseMode mode = ParseMode::strict,
                                             std::ostream* warnings = nullptr) {
    std::ifstream in(path);
    if (!in) throw IoFailure("cannot open dataset: " + path.string());
    return parse_dataset(in, mode, warnings);
}

/// Serializes a record in the fixture schema with stable key order.
inline nlohmann::ordered_json record_to_json(const QueryRecord& rec) {
    nlohmann::ordered_json j;
    j["interaction_id"] = rec.interaction_id;
    j["query"] = rec.query;
    j["answer"] = rec.answer;
    j["alt_answers"] = rec.alt_answers;
    j["question_type"] = std::string(to_string(rec.question_type));
    j["domain"] = std::string(to_string(rec.domain));
    j["timeliness"] = std::string(to_string(rec.timeliness));
    nlohmann::ordered_json results = nlohmann::ordered_json::array();
    for (const SearchResult& r : rec.search_results) {
        nlohmann::ordered_json jr;
        jr["page_name"] = r.page_name;
        jr["page_url"] = r.page_url;
        jr["page_snippet"] = r.page_snippet;
        jr["page_result"] = r.page_result;
        results.push_back(std::move(jr));
    }
    j["search_results"] = std::move(results);
    return j;
}

inline void write_dataset(const std::vector<QueryRecord>& records,
                          const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw IoFailure("cannot write dataset: " + path.string());
    for (const QueryRecord& rec : records) out << record_to_json(rec).dump() << '\n';
    if (!out) throw IoFailure("failed while writing dataset: " + path.string());
}

}  // namespace honestrag
