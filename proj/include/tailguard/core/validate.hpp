#pragma once

// Invariant checks over the core model. Violations are returned as data
// (human-readable strings), never thrown; callers decide whether a violation
// is fatal.

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "tailguard/core/model.hpp"
#include "tailguard/diff/file_kind.hpp"

namespace tailguard {

struct ValidationOptions {
    JsExtensionMode js_mode = JsExtensionMode::Extended;
};

/// Checks every structural invariant of a pull request; returns one entry per
/// violation (empty = ok). Never mutates the input.
inline std::vector<std::string> validate_pull_request(const PullRequest& pr,
                                                      const ValidationOptions& opts = {}) {
    std::vector<std::string> violations;
    const auto outcome_int = static_cast<int>(pr.outcome);
    if (outcome_int < 0 || outcome_int > 2) {
        violations.push_back("pr " + pr.id + ": outcome out of range");
    }
    for (const auto& file : pr.files) {
        if (file.path.empty()) {
            violations.push_back("pr " + pr.id + ": file with empty path");
            continue;
        }
        if (file.kind != classify_file_change(file.path, opts.js_mode)) {
            violations.push_back("pr " + pr.id + ": kind of '" + file.path +
                                 "' does not match its path");
        }
        for (std::size_t h = 0; h < file.hunks.size(); ++h) {
            const auto& hunk = file.hunks[h];
            std::optional<std::uint64_t> prev;
            for (const auto& line : hunk.lines) {
                const bool needs_lineno = line.tag != LineTag::Removed;
                if (needs_lineno && !line.new_lineno) {
                    violations.push_back("pr " + pr.id + ": '" + file.path + "' hunk " +
                                         std::to_string(h) + ": missing new_lineno");
                } else if (!needs_lineno && line.new_lineno) {
                    violations.push_back("pr " + pr.id + ": '" + file.path + "' hunk " +
                                         std::to_string(h) + ": new_lineno on Removed");
                }
                if (needs_lineno && line.new_lineno) {
                    if (prev && *line.new_lineno <= *prev) {
                        violations.push_back("pr " + pr.id + ": '" + file.path + "' hunk " +
                                             std::to_string(h) +
                                             ": non-increasing line numbers");
                    }
                    prev = line.new_lineno;
                }
            }
        }
    }
    return violations;
}

inline std::vector<std::string> validate_library_record(const LibraryRecord& lib,
                                                        const ValidationOptions& opts = {}) {
    std::vector<std::string> violations;
    if (lib.name.empty()) violations.push_back("library with empty name");
    if (lib.dependents_rank && *lib.dependents_rank < 1) {
        violations.push_back("library " + lib.name + ": dependents_rank below 1");
    }
    for (const auto& pr : lib.pulls) {
        auto v = validate_pull_request(pr, opts);
        violations.insert(violations.end(), v.begin(), v.end());
    }
    return violations;
}

/// Corpus-wide checks: per-library invariants plus rank uniqueness.
inline std::vector<std::string> validate_corpus(const Corpus& corpus,
                                                const ValidationOptions& opts = {}) {
    std::vector<std::string> violations;
    std::set<std::uint32_t> seen_ranks;
    for (const auto& lib : corpus.libraries) {
        auto v = validate_library_record(lib, opts);
        violations.insert(violations.end(), v.begin(), v.end());
        if (lib.dependents_rank) {
            if (!seen_ranks.insert(*lib.dependents_rank).second) {
                violations.push_back("library " + lib.name + ": duplicate dependents_rank " +
                                     std::to_string(*lib.dependents_rank));
            }
        }
    }
    return violations;
}

}  // namespace tailguard
