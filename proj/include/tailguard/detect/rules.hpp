#pragma once

// The versioned rule catalog behind the unsafe-update detector. The original
// expressions used in prior published work on suspicious package updates are
// not public; these patterns are a reconstruction from the published feature
// descriptions, and reports cite this catalog's version so results stay
// attributable to a concrete rule set.

#include <array>
#include <string_view>

#include "tailguard/core/model.hpp"

namespace tailguard {

inline constexpr std::string_view kRuleCatalogVersion = "1.0.0";

struct DetectorOptions {
    // Raw mode drops the word-boundary guards and string-literal masking,
    // matching the bare patterns anywhere in the added line.
    bool raw_regex = false;
};

struct RuleInfo {
    std::string_view id;
    UnsafeFeature feature;
    std::string_view description;
    std::string_view default_pattern;
    std::string_view raw_pattern;
};

inline constexpr std::array<RuleInfo, 6> kRuleCatalog = {{
    {"TG-R1", UnsafeFeature::NewScripts,
     "entry added under the \"scripts\" object of package.json "
     "(lexical brace/key tracking over the hunk; ambiguous context is kept "
     "and flagged low-confidence)",
     "\"name\": \"command\" added inside the scripts block", "same (mode has no effect)"},
    {"TG-R2", UnsafeFeature::HttpAccess,
     "import of module http, http2 or https via require(), import-from, "
     "dynamic import() or bare import (optional node: prefix)",
     "require(\"http|http2|https\") / from \"http|http2|https\"",
     "same, without word boundaries or string masking"},
    {"TG-R3", UnsafeFeature::FsUse,
     "import of module fs or fs/promises, or a member call on an identifier "
     "named fs",
     "require(\"fs\") / from \"fs\" / fs.<member>(", "fs\\s*\\. substring"},
    {"TG-R4", UnsafeFeature::NetUse,
     "import of module net, or a member call on an identifier named net",
     "require(\"net\") / from \"net\" / net.<member>(", "net\\s*\\. substring"},
    {"TG-R5", UnsafeFeature::EvalUse, "call of eval() or new Function()",
     "eval\\s*\\( with word boundary; new\\s+Function\\s*\\(",
     "eval\\s*\\( substring; new\\s+Function\\s*\\("},
    {"TG-R6", UnsafeFeature::RequireUse, "call of require()",
     "require\\s*\\( with word boundary", "require\\s*\\( substring"},
}};

inline const RuleInfo& rule_for(UnsafeFeature f) {
    for (const auto& rule : kRuleCatalog) {
        if (rule.feature == f) return rule;
    }
    return kRuleCatalog[0];
}

}  // namespace tailguard
