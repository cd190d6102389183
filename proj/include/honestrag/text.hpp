#pragma once

#include <cctype>
#include <string>
#include <string_view>
#include <vector>

namespace honestrag::text {

inline bool is_space(char c) {
    return std::isspace(static_cast<unsigned char>(c)) != 0;
}

inline std::string_view trim(std::string_view s) {
    std::size_t b = 0;
    std::size_t e = s.size();
    while (b < e && is_space(s[b])) ++b;
    while (e > b && is_space(s[e - 1])) --e;
    return s.substr(b, e - b);
}

/// Non-empty maximal runs of non-whitespace characters, in order.
inline std::vector<std::string> whitespace_tokens(std::string_view s) {
    std::vector<std::string> out;
    std::size_t i = 0;
    while (i < s.size()) {
        while (i < s.size() && is_space(s[i])) ++i;
        std::size_t start = i;
        while (i < s.size() && !is_space(s[i])) ++i;
        if (i > start) out.emplace_back(s.substr(start, i - start));
    }
    return out;
}

/// Replaces the UTF-8 right single quotation mark (U+2019) with ASCII '\''.
inline std::string unify_apostrophes(std::string_view s) {
    static constexpr std::string_view kRightQuote = "\xe2\x80\x99";
    std::string out;
    out.reserve(s.size());
    std::size_t i = 0;
    while (i < s.size()) {
        if (s.compare(i, kRightQuote.size(), kRightQuote) == 0) {
            out.push_back('\'');
            i += kRightQuote.size();
        } else {
            out.push_back(s[i]);
            ++i;
        }
    }
    return out;
}

/// Answer normalization applied to ground truths, model answers, and
/// predictions before any comparison: apostrophes unified, ASCII letters
/// lowercased, whitespace runs collapsed to single spaces, surrounding
/// whitespace removed, trailing sentence punctuation stripped. Idempotent.
inline std::string normalize_answer(std::string_view s) {
    std::string unified = unify_apostrophes(s);
    std::string out;
    out.reserve(unified.size());
    bool pending_space = false;
    for (char c : unified) {
        if (is_space(c)) {
            if (!out.empty()) pending_space = true;
            continue;
        }
        if (pending_space) {
            out.push_back(' ');
            pending_space = false;
        }
        out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    }
    auto is_trailing = [](char c) {
        return c == '.' || c == ',' || c == '!' || c == '?' || c == ';' || c == ':' || c == ' ';
    };
    while (!out.empty() && is_trailing(out.back())) out.pop_back();
    return out;
}

}  // namespace honestrag::text
