#pragma once

// Applies the rule catalog to a whole pull request: the update-related gate,
// per-line feature matching on JavaScript files, and manifest script
// additions. Pure and reentrant; PRs can be scanned concurrently.

#include <algorithm>
#include <cstdint>
#include <set>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include "tailguard/core/model.hpp"
#include "tailguard/detect/line_scan.hpp"
#include "tailguard/detect/rules.hpp"
#include "tailguard/diff/manifest_scripts.hpp"

namespace tailguard {

inline constexpr std::size_t kMaxExcerptLength = 120;

/// One rule match inside a PR. `matched_text` is a substring of the added
/// line it fired on, truncated to 120 characters.
struct FeatureHit {
    UnsafeFeature feature;
    std::string file_path;
    std::uint64_t new_lineno = 0;
    std::string matched_text;
    bool low_confidence = false;

    bool operator==(const FeatureHit&) const = default;
};

/// Scan result for one PR. A PR is "unsafe" exactly when `hits` is nonempty,
/// which can only happen when it is update-related.
struct UnsafeReport {
    std::string pr_id;
    bool update_related = false;
    std::vector<FeatureHit> hits;
    std::set<UnsafeFeature> features_present;

    bool unsafe() const { return !hits.empty(); }

    bool operator==(const UnsafeReport&) const = default;
};

/// A PR is update-related when it touches a JavaScript file or a manifest.
inline bool is_update_related(const PullRequest& pr) {
    return std::any_of(pr.files.begin(), pr.files.end(), [](const FileChange& f) {
        return f.kind == FileKind::JavaScript || f.kind == FileKind::Manifest;
    });
}

namespace detail {

// Matches are found on the stripped line; the reported excerpt must still be
// a substring of the raw added line. When comment removal broke that up,
// fall back to the leading token.
inline std::string anchor_excerpt(std::string_view raw_line, std::string excerpt) {
    if (raw_line.find(excerpt) == std::string_view::npos) {
        const auto cut = excerpt.find_first_of(" \t");
        if (cut != std::string::npos) excerpt.resize(cut);
        if (raw_line.find(excerpt) == std::string_view::npos) return std::string();
    }
    if (excerpt.size() > kMaxExcerptLength) excerpt.resize(kMaxExcerptLength);
    return excerpt;
}

inline std::string clip(std::string_view text) {
    std::string out(text.substr(0, std::min(text.size(), kMaxExcerptLength)));
    return out;
}

}  // namespace detail

/// Full detector pass over one PR. Hits are ordered by
/// (file_path, new_lineno, feature) and deduplicated to one hit per feature
/// per line; parse warnings on a file mark its hits low-confidence.
inline UnsafeReport scan_pull_request(const PullRequest& pr, const DetectorOptions& opts = {}) {
    UnsafeReport report;
    report.pr_id = pr.id;
    report.update_related = is_update_related(pr);
    if (!report.update_related) return report;

    for (const auto& file : pr.files) {
        if (file.kind == FileKind::JavaScript) {
            for (const auto& hunk : file.hunks) {
                for (const auto& line : hunk.lines) {
                    if (line.tag != LineTag::Added) continue;
                    const std::string stripped = strip_line_comments(line.content);
                    std::set<UnsafeFeature> on_line;
                    auto matches = detail::scan_added_line(stripped, file.kind, opts);
                    std::sort(matches.begin(), matches.end(),
                              [](const auto& a, const auto& b) { return a.position < b.position; });
                    for (const auto& m : matches) {
                        if (!on_line.insert(m.feature).second) continue;
                        report.hits.push_back(FeatureHit{
                            m.feature, file.path, line.new_lineno.value_or(0),
                            detail::anchor_excerpt(line.content, m.matched_text),
                            file.parse_warning});
                    }
                }
            }
        } else if (file.kind == FileKind::Manifest) {
            for (const auto& addition : extract_manifest_script_additions(file)) {
                // Recover the raw added line for the excerpt.
                std::string_view raw;
                for (const auto& hunk : file.hunks) {
                    for (const auto& line : hunk.lines) {
                        if (line.tag == LineTag::Added && line.new_lineno &&
                            *line.new_lineno == addition.new_lineno) {
                            raw = line.content;
                        }
                    }
                }
                std::string_view trimmed = raw;
                while (!trimmed.empty() && (trimmed.front() == ' ' || trimmed.front() == '\t'))
                    trimmed.remove_prefix(1);
                report.hits.push_back(FeatureHit{
                    UnsafeFeature::NewScripts, file.path, addition.new_lineno,
                    detail::clip(trimmed), addition.low_confidence || file.parse_warning});
            }
        }
    }

    // stable: inline script entries can share a line and must keep order
    std::stable_sort(report.hits.begin(), report.hits.end(),
                     [](const FeatureHit& a, const FeatureHit& b) {
                         return std::tie(a.file_path, a.new_lineno, a.feature) <
                                std::tie(b.file_path, b.new_lineno, b.feature);
                     });
    for (const auto& hit : report.hits) report.features_present.insert(hit.feature);
    return report;
}

/// Canonical single-line serialization of a report; identical inputs always
/// produce identical bytes.
inline std::string serialize_report(const UnsafeReport& report) {
    std::string out = "{\"pr_id\":\"" + report.pr_id + "\",\"update_related\":";
    out += report.update_related ? "true" : "false";
    out += ",\"features\":[";
    bool first = true;
    for (const auto f : report.features_present) {
        if (!first) out += ',';
        first = false;
        out += '"';
        out += to_string(f);
        out += '"';
    }
    out += "],\"hits\":[";
    first = true;
    for (const auto& hit : report.hits) {
        if (!first) out += ',';
        first = false;
        out += "{\"feature\":\"";
        out += to_string(hit.feature);
        out += "\",\"file\":\"" + hit.file_path + "\",\"line\":" +
               std::to_string(hit.new_lineno) + ",\"low_confidence\":";
        out += hit.low_confidence ? "true" : "false";
        out += '}';
    }
    out += "]}";
    return out;
}

}  // namespace tailguard
