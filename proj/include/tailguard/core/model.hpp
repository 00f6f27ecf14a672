#pragma once

// Core domain model: libraries, pull requests, parsed diffs, and the
// enumerations every other component is built on. All types here are
// immutable value objects once constructed; they carry no I/O and may be
// freely copied and shared across threads.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace tailguard {

/// Review outcome of a pull request. `Closed` always means closed without
/// being merged; a merged-then-closed record counts as `Merged`.
enum class Outcome { Merged, Closed, Opened };

/// Coarse kind of a changed file, derived purely from its path.
/// `Manifest` means the basename is exactly `package.json`.
enum class FileKind { JavaScript, Manifest, Markdown, JsonOther, Other };

/// The six indicators a dependency update is flagged on, in catalog order.
enum class UnsafeFeature {
    NewScripts,  // new entry under the manifest "scripts" block
    HttpAccess,  // use of the http / http2 / https modules
    FsUse,       // use of the fs module
    NetUse,      // use of the net module
    EvalUse,     // eval() or new Function()
    RequireUse,  // require() call
};

inline constexpr UnsafeFeature kAllFeatures[] = {
    UnsafeFeature::NewScripts, UnsafeFeature::HttpAccess, UnsafeFeature::FsUse,
    UnsafeFeature::NetUse,     UnsafeFeature::EvalUse,    UnsafeFeature::RequireUse,
};

/// Multi-label change categories for a pull request.
enum class ChangeType { Feature, Bug, TestCases, Refactoring, Documentation, Other };

inline constexpr ChangeType kAllChangeTypes[] = {
    ChangeType::Feature,     ChangeType::Bug,           ChangeType::TestCases,
    ChangeType::Refactoring, ChangeType::Documentation, ChangeType::Other,
};

/// Dependence stratum of a library. `Unsampled` marks libraries matching no
/// tier rule under the active configuration.
enum class Tier { Top, Middle, Bottom, Unsampled };

inline constexpr Tier kSampledTiers[] = {Tier::Top, Tier::Middle, Tier::Bottom};

enum class LineTag { Context, Added, Removed };

/// One line of a diff hunk. `new_lineno` is the line number in the post-image
/// file and is present exactly for Context and Added lines.
struct DiffLine {
    LineTag tag = LineTag::Context;
    std::string content;
    std::optional<std::uint64_t> new_lineno;

    bool operator==(const DiffLine&) const = default;
};

/// A contiguous `@@ -a,b +c,d @@` region of a unified diff.
struct DiffHunk {
    std::uint64_t old_start = 0;
    std::uint64_t new_start = 0;
    std::vector<DiffLine> lines;

    bool operator==(const DiffHunk&) const = default;
};

/// One changed file of a pull request. `patch` is the per-file unified-diff
/// body verbatim as served by the forge; `hunks` is its parsed form and
/// `kind` the path-derived classification. `parse_warning` is set when the
/// patch had trailing inconsistencies and parsing stopped early.
struct FileChange {
    std::string path;
    FileKind kind = FileKind::Other;
    std::string patch;
    std::vector<DiffHunk> hunks;
    bool parse_warning = false;

    bool operator==(const FileChange&) const = default;
};

struct PullRequest {
    std::string id;     // forge-unique identifier
    std::string repo;   // owning library name
    std::string title;
    std::string body;   // may be empty
    Outcome outcome = Outcome::Opened;
    std::vector<FileChange> files;              // may be empty (metadata-only)
    std::optional<std::string> created_at;      // UTC timestamp, verbatim

    bool operator==(const PullRequest&) const = default;
};

struct LibraryRecord {
    std::string name;
    std::uint64_t dependents = 0;
    std::optional<std::uint32_t> dependents_rank;  // 1-based, by descending dependents
    std::vector<PullRequest> pulls;

    bool operator==(const LibraryRecord&) const = default;
};

/// A set of libraries under analysis. Canonical form keeps libraries sorted
/// by name and each library's pulls sorted by id, which makes serialization
/// deterministic; `normalize()` establishes that form.
struct Corpus {
    std::vector<LibraryRecord> libraries;
    std::optional<std::string> snapshot_at;

    void normalize();

    std::size_t pr_count() const {
        std::size_t n = 0;
        for (const auto& lib : libraries) n += lib.pulls.size();
        return n;
    }

    bool operator==(const Corpus&) const = default;
};

inline void Corpus::normalize() {
    std::sort(libraries.begin(), libraries.end(),
              [](const LibraryRecord& a, const LibraryRecord& b) { return a.name < b.name; });
    for (auto& lib : libraries) {
        std::sort(lib.pulls.begin(), lib.pulls.end(),
                  [](const PullRequest& a, const PullRequest& b) { return a.id < b.id; });
    }
}

inline const char* to_string(Outcome o) {
    switch (o) {
        case Outcome::Merged: return "merged";
        case Outcome::Closed: return "closed";
        case Outcome::Opened: return "opened";
    }
    return "?";
}

inline const char* to_string(FileKind k) {
    switch (k) {
        case FileKind::JavaScript: return "javascript";
        case FileKind::Manifest:   return "manifest";
        case FileKind::Markdown:   return "markdown";
        case FileKind::JsonOther:  return "json_other";
        case FileKind::Other:      return "other";
    }
    return "?";
}

inline const char* to_string(UnsafeFeature f) {
    switch (f) {
        case UnsafeFeature::NewScripts: return "new_scripts";
        case UnsafeFeature::HttpAccess: return "http";
        case UnsafeFeature::FsUse:      return "fs";
        case UnsafeFeature::NetUse:     return "net";
        case UnsafeFeature::EvalUse:    return "eval";
        case UnsafeFeature::RequireUse: return "require";
    }
    return "?";
}

inline const char* to_string(ChangeType t) {
    switch (t) {
        case ChangeType::Feature:       return "feature";
        case ChangeType::Bug:           return "bug";
        case ChangeType::TestCases:     return "test_cases";
        case ChangeType::Refactoring:   return "refactoring";
        case ChangeType::Documentation: return "documentation";
        case ChangeType::Other:         return "other";
    }
    return "?";
}

inline const char* display_name(ChangeType t) {
    switch (t) {
        case ChangeType::Feature:       return "Feature";
        case ChangeType::Bug:           return "Bug";
        case ChangeType::TestCases:     return "Test Cases";
        case ChangeType::Refactoring:   return "Refactoring";
        case ChangeType::Documentation: return "Documentation";
        case ChangeType::Other:         return "Other";
    }
    return "?";
}

inline const char* to_string(Tier t) {
    switch (t) {
        case Tier::Top:       return "Top";
        case Tier::Middle:    return "Middle";
        case Tier::Bottom:    return "Bottom";
        case Tier::Unsampled: return "Unsampled";
    }
    return "?";
}

}  // namespace tailguard
