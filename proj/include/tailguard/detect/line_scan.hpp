#pragma once

// Per-line pattern matching for the five code-level features. Lines are
// expected to be comment-stripped already; default mode additionally masks
// string-literal contents (length-preserving) so quoted text cannot trigger
// call patterns, while module-specifier checks read the literal back from
// the original characters.

#include <optional>
#include <regex>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "tailguard/core/model.hpp"
#include "tailguard/detect/rules.hpp"

namespace tailguard {

/// Removes `//` comments to end of line and complete `/* ... */` spans,
/// honoring single, double and backtick quotes on this line. An unterminated
/// `/*` is left as-is (only complete spans are removed).
inline std::string strip_line_comments(std::string_view line) {
    std::string out;
    out.reserve(line.size());
    char quote = 0;
    std::size_t i = 0;
    while (i < line.size()) {
        const char c = line[i];
        if (quote != 0) {
            out.push_back(c);
            if (c == '\\' && i + 1 < line.size()) {
                out.push_back(line[i + 1]);
                i += 2;
                continue;
            }
            if (c == quote) quote = 0;
            ++i;
            continue;
        }
        if (c == '"' || c == '\'' || c == '`') {
            quote = c;
            out.push_back(c);
            ++i;
            continue;
        }
        if (c == '/' && i + 1 < line.size() && line[i + 1] == '/') {
            break;  // rest of line is a comment
        }
        if (c == '/' && i + 1 < line.size() && line[i + 1] == '*') {
            const auto close = line.find("*/", i + 2);
            if (close == std::string_view::npos) {
                out.append(line.substr(i));  // incomplete span, keep verbatim
                break;
            }
            i = close + 2;
            continue;
        }
        out.push_back(c);
        ++i;
    }
    return out;
}

namespace detail {

// Replaces string-literal contents with spaces, keeping the quotes and the
// length, so match positions carry over to the original line.
inline std::string mask_string_literals(std::string_view line) {
    std::string out(line);
    char quote = 0;
    for (std::size_t i = 0; i < out.size(); ++i) {
        const char c = out[i];
        if (quote != 0) {
            if (c == '\\') {
                out[i] = ' ';
                if (i + 1 < out.size()) out[++i] = ' ';
                continue;
            }
            if (c == quote) {
                quote = 0;
                continue;
            }
            out[i] = ' ';
            continue;
        }
        if (c == '"' || c == '\'' || c == '`') quote = c;
    }
    return out;
}

// Reads the quoted module specifier starting at `quote_pos` in the original
// line (any of the three quote kinds).
inline std::optional<std::string> specifier_at(std::string_view original, std::size_t quote_pos) {
    if (quote_pos >= original.size()) return std::nullopt;
    const char quote = original[quote_pos];
    std::size_t i = quote_pos + 1;
    std::string spec;
    while (i < original.size()) {
        const char c = original[i];
        if (c == '\\' && i + 1 < original.size()) {
            spec.push_back(original[i + 1]);
            i += 2;
            continue;
        }
        if (c == quote) return spec;
        spec.push_back(c);
        ++i;
    }
    return std::nullopt;
}

inline std::optional<UnsafeFeature> module_feature(std::string_view spec) {
    if (spec.starts_with("node:")) spec = spec.substr(5);
    if (spec == "http" || spec == "http2" || spec == "https") return UnsafeFeature::HttpAccess;
    if (spec == "fs" || spec == "fs/promises") return UnsafeFeature::FsUse;
    if (spec == "net") return UnsafeFeature::NetUse;
    return std::nullopt;
}

struct LineMatch {
    UnsafeFeature feature;
    std::string matched_text;
    std::size_t position;
};

// Compiled patterns for one strictness mode. The boundary prefix
// (?:^|[^A-Za-z0-9_$]) keeps tokens out of longer identifiers and is dropped
// in raw mode; member patterns degrade to bare `fs.` / `net.` substrings
// there. Group 1 always delimits the reported match.
struct CompiledRules {
    std::regex require_call;
    std::regex eval_call;
    std::regex new_function;
    std::regex fs_member;
    std::regex net_member;
    std::regex require_specifier;
    std::regex from_specifier;
    std::regex dynamic_import_specifier;
    std::regex bare_import_specifier;
};

inline const CompiledRules& compiled_rules(bool raw) {
    static const auto make = [](bool raw_mode) {
        const std::string b = raw_mode ? "" : "(?:^|[^A-Za-z0-9_$])";
        const auto compile = [](const std::string& p) {
            return std::regex(p, std::regex::ECMAScript | std::regex::optimize);
        };
        const std::string member_tail =
            raw_mode ? "\\s*\\.)"
                     : "\\s*\\.\\s*[A-Za-z_$][A-Za-z0-9_$]*"
                       "(?:\\s*\\.\\s*[A-Za-z_$][A-Za-z0-9_$]*)*\\s*\\()";
        CompiledRules r;
        r.require_call = compile(b + "(require\\s*\\()");
        r.eval_call = compile(b + "(eval\\s*\\()");
        r.new_function = compile(b + "(new\\s+Function\\s*\\()");
        r.fs_member = compile(b + "(fs" + member_tail);
        r.net_member = compile(b + "(net" + member_tail);
        r.require_specifier = compile(b + "(require\\s*\\(\\s*[\"'`])");
        r.from_specifier = compile(b + "(from\\s*[\"'`])");
        r.dynamic_import_specifier = compile(b + "(import\\s*\\(\\s*[\"'`])");
        r.bare_import_specifier = compile(b + "(import\\s*[\"'`])");
        return r;
    };
    static const CompiledRules with_boundaries = make(false);
    static const CompiledRules raw_rules = make(true);
    return raw ? raw_rules : with_boundaries;
}

inline void collect_matches(const std::string& haystack, std::string_view original,
                            const std::regex& pattern, UnsafeFeature feature,
                            bool specifier_follows, std::vector<LineMatch>& out) {
    for (auto it = std::sregex_iterator(haystack.begin(), haystack.end(), pattern);
         it != std::sregex_iterator(); ++it) {
        const auto sub = (*it)[1];
        if (!sub.matched) continue;
        const auto pos = static_cast<std::size_t>(sub.first - haystack.begin());
        const auto len = static_cast<std::size_t>(sub.length());
        if (specifier_follows) {
            // The capture ends at the opening quote of a module specifier.
            const auto spec = specifier_at(original, pos + len - 1);
            if (!spec) continue;
            const auto feat = module_feature(*spec);
            if (!feat) continue;
            const auto excerpt_len = len + spec->size() + 1;
            out.push_back(LineMatch{*feat, std::string(original.substr(pos, excerpt_len)), pos});
        } else {
            out.push_back(LineMatch{feature, std::string(original.substr(pos, len)), pos});
        }
    }
}

// All rule matches on one comment-stripped added line.
inline std::vector<LineMatch> scan_added_line(std::string_view line, FileKind kind,
                                              const DetectorOptions& opts) {
    std::vector<LineMatch> matches;
    if (kind != FileKind::JavaScript) return matches;  // manifest handled by diff rules

    const std::string original(line);
    const std::string masked = opts.raw_regex ? original : mask_string_literals(original);
    const CompiledRules& rules = compiled_rules(opts.raw_regex);

    collect_matches(masked, original, rules.require_call, UnsafeFeature::RequireUse, false,
                    matches);
    collect_matches(masked, original, rules.eval_call, UnsafeFeature::EvalUse, false, matches);
    collect_matches(masked, original, rules.new_function, UnsafeFeature::EvalUse, false, matches);
    collect_matches(masked, original, rules.fs_member, UnsafeFeature::FsUse, false, matches);
    collect_matches(masked, original, rules.net_member, UnsafeFeature::NetUse, false, matches);
    const auto spec_feature = UnsafeFeature::RequireUse;  // overridden by the specifier
    collect_matches(masked, original, rules.require_specifier, spec_feature, true, matches);
    collect_matches(masked, original, rules.from_specifier, spec_feature, true, matches);
    collect_matches(masked, original, rules.dynamic_import_specifier, spec_feature, true, matches);
    collect_matches(masked, original, rules.bare_import_specifier, spec_feature, true, matches);
    return matches;
}

}  // namespace detail

/// Set of features present on one comment-stripped added line.
inline std::set<UnsafeFeature> detect_features_in_line(std::string_view line, FileKind kind,
                                                       const DetectorOptions& opts = {}) {
    std::set<UnsafeFeature> features;
    for (const auto& m : detail::scan_added_line(line, kind, opts)) features.insert(m.feature);
    return features;
}

}  // namespace tailguard
