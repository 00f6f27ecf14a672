#pragma once

// Text normalization for keyword classification: lowercase, punctuation and
// non-textual symbols become whitespace, and each token passes through a
// small rule-based lemmatizer. The rules are deliberately tiny; they only
// need to be stable (idempotent) and to fold the inflections that matter for
// the shipped keyword lists. Fixtures pin the exact behavior.

#include <string>
#include <string_view>
#include <vector>

namespace tailguard {

namespace detail {

inline bool is_token_char(char c) {
    return (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9');
}

inline bool is_consonant(char c) {
    return c >= 'a' && c <= 'z' && c != 'a' && c != 'e' && c != 'i' && c != 'o' && c != 'u';
}

inline bool ends_with(std::string_view s, std::string_view suffix) {
    return s.size() >= suffix.size() && s.substr(s.size() - suffix.size()) == suffix;
}

// After -ing/-ed removal: un-double a final consonant (stopping -> stop) or
// restore a dropped final e for a fixed set of stem endings
// (updat -> update, improv -> improve, clos -> close, ...).
inline void repair_stem(std::string& stem) {
    if (stem.size() >= 3) {
        const char last = stem[stem.size() - 1];
        const char prev = stem[stem.size() - 2];
        if (last == prev && is_consonant(last) && last != 'l' && last != 's' && last != 'z' &&
            last != 'd') {
            stem.pop_back();
            return;
        }
    }
    static constexpr std::string_view kRestoreE[] = {"iz", "is", "ov", "lv", "os"};
    for (const auto suffix : kRestoreE) {
        if (ends_with(stem, suffix)) {
            stem.push_back('e');
            return;
        }
    }
    if (stem.size() >= 3 && ends_with(stem, "at") && is_consonant(stem[stem.size() - 3])) {
        stem.push_back('e');
        return;
    }
    if (stem.size() >= 3 && ends_with(stem, "ad") && is_consonant(stem[stem.size() - 3])) {
        stem.push_back('e');
        return;
    }
    if (stem.size() >= 3 && stem.back() == 'l' && is_consonant(stem[stem.size() - 2]) &&
        stem[stem.size() - 2] != 'l') {
        stem.push_back('e');
    }
}

}  // namespace detail

/// Lemmatizes one lowercase token. Plural endings first (-ies -> y, -es
/// after a sibilant, plain -s with an exception list), then -ing/-ed with
/// stem repair.
inline std::string lemmatize_token(std::string token) {
    using detail::ends_with;
    if (ends_with(token, "ies") && token.size() >= 5) {
        token.erase(token.size() - 3);
        token.push_back('y');
        return token;
    }
    if (ends_with(token, "es")) {
        const std::string_view stem(token.data(), token.size() - 2);
        const bool sibilant = ends_with(stem, "x") || ends_with(stem, "z") ||
                              ends_with(stem, "ch") || ends_with(stem, "sh") ||
                              ends_with(stem, "ss") || ends_with(stem, "o");
        if (sibilant && stem.size() >= 2) {
            token.erase(token.size() - 2);
            return token;
        }
    }
    if (ends_with(token, "s") && !ends_with(token, "ss") && !ends_with(token, "us") &&
        !ends_with(token, "is") && token.size() >= 3) {
        token.pop_back();
        return token;
    }
    if (ends_with(token, "ing") && token.size() >= 6) {
        token.erase(token.size() - 3);
        detail::repair_stem(token);
        return token;
    }
    if (ends_with(token, "ed") && token.size() >= 5) {
        token.erase(token.size() - 2);
        detail::repair_stem(token);
        return token;
    }
    return token;
}

/// Normalizes raw title/body text into an ordered token list.
inline std::vector<std::string> normalize_text(std::string_view text) {
    std::vector<std::string> tokens;
    std::string current;
    for (const char raw : text) {
        char c = raw;
        if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
        if (detail::is_token_char(c)) {
            current.push_back(c);
        } else if (!current.empty()) {
            tokens.push_back(lemmatize_token(std::move(current)));
            current.clear();
        }
    }
    if (!current.empty()) tokens.push_back(lemmatize_token(std::move(current)));
    return tokens;
}

/// True when `phrase` occurs as consecutive tokens of `tokens`.
inline bool contains_phrase(const std::vector<std::string>& tokens,
                            const std::vector<std::string>& phrase) {
    if (phrase.empty() || phrase.size() > tokens.size()) return false;
    for (std::size_t i = 0; i + phrase.size() <= tokens.size(); ++i) {
        bool all = true;
        for (std::size_t j = 0; j < phrase.size(); ++j) {
            if (tokens[i + j] != phrase[j]) {
                all = false;
                break;
            }
        }
        if (all) return true;
    }
    return false;
}

}  // namespace tailguard
