#pragma once

// Multi-label change-type classification over PR title/body keywords plus
// two file-based rules (Markdown edits imply Documentation, json-only change
// sets imply Other). A PR always receives at least one label.

#include <string>
#include <vector>

#include "tailguard/classify/normalize.hpp"
#include "tailguard/classify/taxonomy.hpp"
#include "tailguard/core/model.hpp"

namespace tailguard {

struct ClassificationResult {
    std::string pr_id;
    std::vector<ChangeType> types;  // ascending enum order, no duplicates
    bool attention = false;

    bool has(ChangeType t) const {
        for (const auto type : types)
            if (type == t) return true;
        return false;
    }
};

namespace detail {

inline bool any_phrase_matches(const std::vector<std::string>& tokens,
                               const std::vector<KeywordPhrase>& phrases) {
    for (const auto& phrase : phrases) {
        if (contains_phrase(tokens, phrase)) return true;
    }
    return false;
}

}  // namespace detail

inline bool has_attention_keywords(const PullRequest& pr, const KeywordTaxonomy& taxonomy) {
    const auto tokens = normalize_text(pr.title + " " + pr.body);
    return detail::any_phrase_matches(tokens, taxonomy.attention);
}

inline ClassificationResult classify_change_types(const PullRequest& pr,
                                                  const KeywordTaxonomy& taxonomy) {
    ClassificationResult result;
    result.pr_id = pr.id;

    const auto tokens = normalize_text(pr.title + " " + pr.body);

    bool any_markdown = false;
    bool json_only = !pr.files.empty();
    for (const auto& file : pr.files) {
        if (file.kind == FileKind::Markdown) any_markdown = true;
        if (file.kind != FileKind::Manifest && file.kind != FileKind::JsonOther) json_only = false;
    }

    for (const auto type : kAllChangeTypes) {
        bool matched = false;
        const auto it = taxonomy.keywords.find(type);
        if (it != taxonomy.keywords.end())
            matched = detail::any_phrase_matches(tokens, it->second);
        if (type == ChangeType::Documentation && any_markdown) matched = true;
        if (type == ChangeType::Other && json_only) matched = true;
        if (matched) result.types.push_back(type);
    }
    if (result.types.empty()) result.types.push_back(ChangeType::Other);

    result.attention = detail::any_phrase_matches(tokens, taxonomy.attention);
    return result;
}

}  // namespace tailguard
