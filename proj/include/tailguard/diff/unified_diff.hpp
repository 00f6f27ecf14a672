#pragma once

// Parser for per-file unified-diff patch bodies as served by common forges.
// Only hunk syntax is handled: `@@ -a,b +c,d @@ [section]` headers followed
// by ' ' / '+' / '-' prefixed lines. Added and Context lines are assigned
// post-image line numbers from the hunk header arithmetic.

#include <charconv>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "tailguard/core/model.hpp"

namespace tailguard {

class MalformedHunkHeader : public std::runtime_error {
public:
    explicit MalformedHunkHeader(const std::string& what) : std::runtime_error(what) {}
};

/// Result of parsing one patch body. `truncated` is set when the declared
/// hunk line counts and the actual content disagreed; everything parsed up
/// to the inconsistency is kept.
struct ParsedPatch {
    std::vector<DiffHunk> hunks;
    bool truncated = false;
};

namespace detail {

inline std::vector<std::string_view> split_lines(std::string_view text) {
    std::vector<std::string_view> lines;
    std::size_t start = 0;
    while (start <= text.size()) {
        const auto nl = text.find('\n', start);
        if (nl == std::string_view::npos) {
            if (start < text.size()) lines.push_back(text.substr(start));
            break;
        }
        lines.push_back(text.substr(start, nl - start));
        start = nl + 1;
    }
    return lines;
}

inline bool parse_u64(std::string_view s, std::uint64_t& out) {
    const char* first = s.data();
    const char* last = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(first, last, out);
    return ec == std::errc() && ptr == last && !s.empty();
}

// Header grammar: @@ -old_start[,old_count] +new_start[,new_count] @@ ...
// Counts default to 1 when omitted.
struct HunkHeader {
    std::uint64_t old_start = 0, old_count = 1;
    std::uint64_t new_start = 0, new_count = 1;
};

inline bool parse_hunk_header(std::string_view line, HunkHeader& hdr) {
    if (!line.starts_with("@@ -")) return false;
    std::string_view rest = line.substr(4);
    const auto sp = rest.find(' ');
    if (sp == std::string_view::npos) return false;
    std::string_view old_part = rest.substr(0, sp);
    rest = rest.substr(sp + 1);
    if (!rest.starts_with("+")) return false;
    rest = rest.substr(1);
    const auto end = rest.find(" @@");
    if (end == std::string_view::npos) return false;
    std::string_view new_part = rest.substr(0, end);

    const auto split_range = [](std::string_view part, std::uint64_t& start,
                                std::uint64_t& count) {
        const auto comma = part.find(',');
        if (comma == std::string_view::npos) {
            count = 1;
            return parse_u64(part, start);
        }
        return parse_u64(part.substr(0, comma), start) &&
               parse_u64(part.substr(comma + 1), count);
    };
    return split_range(old_part, hdr.old_start, hdr.old_count) &&
           split_range(new_part, hdr.new_start, hdr.new_count);
}

// Lines a forge may prepend to the patch body; harmless to skip.
inline bool is_file_header_line(std::string_view line) {
    return line.starts_with("diff ") || line.starts_with("index ") ||
           line.starts_with("--- ") || line.starts_with("+++ ") ||
           line.starts_with("old mode") || line.starts_with("new mode") ||
           line.starts_with("new file mode") || line.starts_with("deleted file mode") ||
           line.starts_with("similarity index") || line.starts_with("dissimilarity index") ||
           line.starts_with("rename ") || line.starts_with("copy ") ||
           line.starts_with("Binary files") || line == "---" || line == "+++";
}

}  // namespace detail

/// Parses a per-file patch body into hunks. Throws MalformedHunkHeader when
/// a `@@` header cannot be parsed or when non-empty content carries no hunk
/// header at all. Count mismatches inside a hunk are not errors: parsing
/// stops at the inconsistency and the result is flagged `truncated`.
inline ParsedPatch parse_unified_diff(std::string_view patch_text) {
    ParsedPatch result;
    const auto lines = detail::split_lines(patch_text);

    std::size_t i = 0;
    // Skip any leading file-header lines before the first hunk.
    while (i < lines.size() && !lines[i].starts_with("@@")) {
        if (detail::is_file_header_line(lines[i]) || lines[i].empty()) {
            ++i;
            continue;
        }
        throw MalformedHunkHeader("patch content before first hunk header: '" +
                                  std::string(lines[i].substr(0, 60)) + "'");
    }
    if (i == lines.size()) {
        // Empty or header-only patch: no hunks.
        return result;
    }

    while (i < lines.size()) {
        std::string_view line = lines[i];
        if (line.starts_with("\\")) {  // marker trailing a hunk's final line
            ++i;
            continue;
        }
        if (!line.starts_with("@@")) {
            // Trailing junk after the last fully consumed hunk.
            result.truncated = true;
            break;
        }
        detail::HunkHeader hdr;
        if (!detail::parse_hunk_header(line, hdr)) {
            throw MalformedHunkHeader("unparseable hunk header: '" +
                                      std::string(line.substr(0, 60)) + "'");
        }
        ++i;

        DiffHunk hunk;
        hunk.old_start = hdr.old_start;
        hunk.new_start = hdr.new_start;
        std::uint64_t old_left = hdr.old_count;
        std::uint64_t new_left = hdr.new_count;
        std::uint64_t next_new = hdr.new_start;

        while (i < lines.size() && (old_left > 0 || new_left > 0)) {
            std::string_view body = lines[i];
            if (body.starts_with("\\")) {  // "\ No newline at end of file"
                ++i;
                continue;
            }
            DiffLine dl;
            if (body.starts_with("+")) {
                if (new_left == 0) break;
                dl.tag = LineTag::Added;
                dl.content = std::string(body.substr(1));
                dl.new_lineno = next_new++;
                --new_left;
            } else if (body.starts_with("-")) {
                if (old_left == 0) break;
                dl.tag = LineTag::Removed;
                dl.content = std::string(body.substr(1));
                --old_left;
            } else if (body.starts_with(" ") || body.empty()) {
                // An empty line stands for an empty context line.
                if (old_left == 0 || new_left == 0) break;
                dl.tag = LineTag::Context;
                dl.content = body.empty() ? std::string() : std::string(body.substr(1));
                dl.new_lineno = next_new++;
                --old_left;
                --new_left;
            } else {
                break;  // unexpected prefix mid-hunk
            }
            hunk.lines.push_back(std::move(dl));
            ++i;
        }

        const bool complete = (old_left == 0 && new_left == 0);
        if (!hunk.lines.empty() || complete) result.hunks.push_back(std::move(hunk));
        if (!complete) {
            result.truncated = true;
            break;
        }
    }
    return result;
}

}  // namespace tailguard
