#pragma once

// Keyword taxonomy for change-type classification. The built-in lists are a
// compact seed set; the full vocabulary used in the original study is larger,
// so everything here can be replaced wholesale from a JSON config file.

#include <array>
#include <cstdint>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "tailguard/classify/normalize.hpp"
#include "tailguard/core/model.hpp"

namespace tailguard {

class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// A phrase is a sequence of normalized tokens; single keywords are
/// one-element phrases.
using KeywordPhrase = std::vector<std::string>;

struct KeywordTaxonomy {
    std::map<ChangeType, std::vector<KeywordPhrase>> keywords;
    std::vector<KeywordPhrase> attention;

    /// FNV-1a 64-bit over a canonical rendering, as a lowercase hex string.
    /// Stable across runs and platforms; used to stamp reports.
    std::string content_hash() const {
        std::uint64_t h = 1469598103934665603ULL;
        const auto mix = [&h](std::string_view s) {
            for (const unsigned char c : s) {
                h ^= c;
                h *= 1099511628211ULL;
            }
        };
        for (const auto& [type, phrases] : keywords) {
            mix(display_name(type));
            mix("=");
            for (const auto& phrase : phrases) {
                for (const auto& token : phrase) {
                    mix(token);
                    mix("+");
                }
                mix(",");
            }
            mix(";");
        }
        mix("attention=");
        for (const auto& phrase : attention) {
            for (const auto& token : phrase) {
                mix(token);
                mix("+");
            }
            mix(",");
        }
        std::ostringstream out;
        out << std::hex;
        for (int shift = 60; shift >= 0; shift -= 4) out << ((h >> shift) & 0xF);
        return out.str();
    }
};

namespace detail {

inline void add_phrase(std::vector<KeywordPhrase>& list, std::string_view raw) {
    KeywordPhrase phrase = normalize_text(raw);
    if (phrase.empty()) return;
    for (const auto& existing : list) {
        if (existing == phrase) return;  // normalization can fold entries together
    }
    list.push_back(std::move(phrase));
}

inline std::vector<KeywordPhrase> make_phrases(std::initializer_list<std::string_view> raws) {
    std::vector<KeywordPhrase> list;
    for (const auto raw : raws) add_phrase(list, raw);
    return list;
}

}  // namespace detail

/// Built-in seed taxonomy. Keywords are stored normalized, so inflected
/// forms in PR text ("fixes", "upgraded") match their base keyword.
inline KeywordTaxonomy default_taxonomy() {
    KeywordTaxonomy t;
    t.keywords[ChangeType::Feature] = detail::make_phrases(
        {"integrate", "add", "feat", "update", "upgrade", "support", "dependency", "feature",
         "improve", "version", "automate", "compatibility", "bundle", "improvement", "bump"});
    t.keywords[ChangeType::Bug] = detail::make_phrases(
        {"avoid", "fix", "resolve", "close", "bug", "solve", "solution", "issue", "fixing"});
    t.keywords[ChangeType::TestCases] = detail::make_phrases(
        {"test case", "test", "unit test", "CI", "continuous integration"});
    t.keywords[ChangeType::Refactoring] = detail::make_phrases(
        {"remove", "unnecessary", "refactor", "performance", "optimise"});
    t.keywords[ChangeType::Documentation] = detail::make_phrases({"documentation", "doc"});
    t.keywords[ChangeType::Other] = {};
    t.attention = detail::make_phrases({"attention", "breaking", "performance"});
    return t;
}

namespace detail {

inline const std::array<std::pair<std::string_view, ChangeType>, 6>& taxonomy_keys() {
    static const std::array<std::pair<std::string_view, ChangeType>, 6> keys{{
        {"feature", ChangeType::Feature},
        {"bug", ChangeType::Bug},
        {"test_cases", ChangeType::TestCases},
        {"refactoring", ChangeType::Refactoring},
        {"documentation", ChangeType::Documentation},
        {"other", ChangeType::Other},
    }};
    return keys;
}

}  // namespace detail

/// Parses a taxonomy from a JSON object. The object replaces the built-in
/// lists entirely: `{"feature": [...], "bug": [...], ..., "attention": [...]}`.
/// Missing keys mean an empty list for that type. Unknown keys are rejected.
inline KeywordTaxonomy taxonomy_from_json(const nlohmann::json& doc) {
    if (!doc.is_object()) throw ConfigError("taxonomy config must be a JSON object");
    KeywordTaxonomy t;
    for (const auto& [key, type] : detail::taxonomy_keys()) t.keywords[type] = {};

    for (const auto& [key, value] : doc.items()) {
        std::vector<KeywordPhrase>* target = nullptr;
        if (key == "attention") {
            target = &t.attention;
        } else {
            for (const auto& [known, type] : detail::taxonomy_keys()) {
                if (key == known) {
                    target = &t.keywords[type];
                    break;
                }
            }
        }
        if (target == nullptr) throw ConfigError("unknown taxonomy key: " + key);
        if (!value.is_array())
            throw ConfigError("taxonomy key '" + key + "' must be an array of strings");
        for (const auto& entry : value) {
            if (!entry.is_string())
                throw ConfigError("taxonomy key '" + key + "' must be an array of strings");
            detail::add_phrase(*target, entry.get<std::string>());
        }
    }
    return t;
}

inline KeywordTaxonomy load_taxonomy_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open taxonomy file: " + path);
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError("taxonomy file is not valid JSON: " + std::string(e.what()));
    }
    return taxonomy_from_json(doc);
}

}  // namespace tailguard
