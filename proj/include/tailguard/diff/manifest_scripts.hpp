#pragma once

// Finds script entries added to the "scripts" object of a package.json diff.
// Diffs are partial documents, so membership in the scripts block is tracked
// lexically (quoted keys + brace depth) over the Context and Added lines of
// each hunk rather than by a full JSON parse. When a hunk gives no enclosing
// context at all, candidate entries are kept and flagged low-confidence.

#include <cctype>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "tailguard/core/model.hpp"

namespace tailguard {

class WrongFileKind : public std::runtime_error {
public:
    explicit WrongFileKind(const std::string& what) : std::runtime_error(what) {}
};

/// A `"name": "command"` entry added under the manifest scripts block.
struct ScriptAddition {
    std::string script_name;   // non-empty
    std::string command;       // may be empty
    std::uint64_t new_lineno = 0;
    std::string file_path;
    bool low_confidence = false;

    bool operator==(const ScriptAddition&) const = default;
};

namespace detail {

inline std::string json_unescape_min(std::string_view s) {
    std::string out;
    out.reserve(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i] == '\\' && i + 1 < s.size()) {
            const char c = s[++i];
            switch (c) {
                case 'n': out.push_back('\n'); break;
                case 't': out.push_back('\t'); break;
                case 'r': out.push_back('\r'); break;
                case 'b': out.push_back('\b'); break;
                case 'f': out.push_back('\f'); break;
                default:  out.push_back(c); break;  // covers \" \\ \/ and leaves \uXXXX raw
            }
        } else {
            out.push_back(s[i]);
        }
    }
    return out;
}

// Reads a JSON string starting at the opening quote; returns the raw
// (still-escaped) contents and the index just past the closing quote.
inline std::optional<std::pair<std::string_view, std::size_t>> read_json_string(
    std::string_view line, std::size_t quote_pos) {
    std::size_t i = quote_pos + 1;
    while (i < line.size()) {
        if (line[i] == '\\') {
            i += 2;
            continue;
        }
        if (line[i] == '"') {
            return std::make_pair(line.substr(quote_pos + 1, i - quote_pos - 1), i + 1);
        }
        ++i;
    }
    return std::nullopt;
}

// Matches an entire line against  "key" : "value" [,]  with arbitrary
// surrounding whitespace. Tabs and trailing commas are tolerated.
struct ScriptEntry {
    std::string name;
    std::string command;
};

inline std::optional<ScriptEntry> match_script_entry(std::string_view line) {
    std::size_t i = 0;
    const auto skip_ws = [&] {
        while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    };
    skip_ws();
    if (i >= line.size() || line[i] != '"') return std::nullopt;
    const auto key = read_json_string(line, i);
    if (!key || key->first.empty()) return std::nullopt;
    i = key->second;
    skip_ws();
    if (i >= line.size() || line[i] != ':') return std::nullopt;
    ++i;
    skip_ws();
    if (i >= line.size() || line[i] != '"') return std::nullopt;
    const auto value = read_json_string(line, i);
    if (!value) return std::nullopt;
    i = value->second;
    skip_ws();
    if (i < line.size() && line[i] == ',') {
        ++i;
        skip_ws();
    }
    if (i != line.size()) return std::nullopt;
    return ScriptEntry{json_unescape_min(key->first), json_unescape_min(value->first)};
}

// Lexical nesting tracker for the post-image side of one hunk. Frames are
// pushed for every '{' or '[' seen outside strings, keyed by the quoted key
// that introduced them when visible.
class ScriptsContextTracker {
public:
    explicit ScriptsContextTracker(bool starts_at_file_top)
        : base_known_(starts_at_file_top) {}

    enum class Membership { In, Out, Unknown };

    // Membership of entries appearing on the *next* line to be fed.
    Membership current_membership() const {
        for (auto it = frames_.rbegin(); it != frames_.rend(); ++it) {
            if (it->key.has_value()) {
                return *it->key == "scripts" ? Membership::In : Membership::Out;
            }
        }
        // Only anonymous frames (e.g. the root object) or none at all.
        if (base_known_ && depth_below_hunk_ == 0) return Membership::Out;
        return Membership::Unknown;
    }

    // Feeds one post-image line (Context or Added) through the tracker.
    void feed(std::string_view line) {
        std::size_t i = 0;
        bool in_string = false;
        std::size_t string_start = 0;
        while (i < line.size()) {
            const char c = line[i];
            if (in_string) {
                if (c == '\\') {
                    i += 2;
                    continue;
                }
                if (c == '"') {
                    in_string = false;
                    last_string_ = std::string(line.substr(string_start, i - string_start));
                    // A key is a string directly followed by ':'.
                    std::size_t j = i + 1;
                    while (j < line.size() && (line[j] == ' ' || line[j] == '\t')) ++j;
                    pending_key_ = (j < line.size() && line[j] == ':')
                                       ? std::optional<std::string>(last_string_)
                                       : std::nullopt;
                }
                ++i;
                continue;
            }
            switch (c) {
                case '"':
                    in_string = true;
                    string_start = i + 1;
                    break;
                case '{':
                case '[':
                    frames_.push_back(Frame{std::move(pending_key_)});
                    pending_key_.reset();
                    break;
                case '}':
                case ']':
                    if (!frames_.empty()) {
                        frames_.pop_back();
                    } else {
                        // Closed a block opened before this hunk.
                        ++depth_below_hunk_;
                        base_known_ = false;
                    }
                    pending_key_.reset();
                    break;
                case ':':
                    break;  // keeps pending_key_ armed for a brace on a later line
                default:
                    if (!std::isspace(static_cast<unsigned char>(c)) && c != ',') {
                        pending_key_.reset();
                    }
                    break;
            }
            ++i;
        }
    }

private:
    struct Frame {
        std::optional<std::string> key;
    };
    std::vector<Frame> frames_;
    std::optional<std::string> pending_key_;
    std::string last_string_;
    bool base_known_ = false;
    std::uint64_t depth_below_hunk_ = 0;
};

// Pulls `"k": "v"` pairs out of an inline scripts object on a single line,
// e.g.  "scripts": { "build": "make" }.
inline void collect_inline_entries(std::string_view line, std::size_t brace_pos,
                                   std::vector<ScriptEntry>& out) {
    std::size_t i = brace_pos + 1;
    int depth = 1;
    while (i < line.size() && depth > 0) {
        const char c = line[i];
        if (c == '"') {
            const auto key = read_json_string(line, i);
            if (!key) return;
            i = key->second;
            while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
            if (i < line.size() && line[i] == ':' && depth == 1) {
                ++i;
                while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
                if (i < line.size() && line[i] == '"') {
                    const auto value = read_json_string(line, i);
                    if (!value) return;
                    i = value->second;
                    if (!key->first.empty()) {
                        out.push_back(ScriptEntry{json_unescape_min(key->first),
                                                  json_unescape_min(value->first)});
                    }
                    continue;
                }
            }
            continue;
        }
        if (c == '{' || c == '[') ++depth;
        if (c == '}' || c == ']') --depth;
        ++i;
    }
}

// Position of the '{' that opens a  "scripts" :  object on this line, if any.
inline std::optional<std::size_t> scripts_open_brace(std::string_view line) {
    std::size_t i = 0;
    bool in_string = false;
    while (i < line.size()) {
        const char c = line[i];
        if (in_string) {
            if (c == '\\') {
                i += 2;
                continue;
            }
            if (c == '"') in_string = false;
            ++i;
            continue;
        }
        if (c == '"') {
            const auto s = read_json_string(line, i);
            if (!s) return std::nullopt;
            if (s->first == "scripts") {
                std::size_t j = s->second;
                while (j < line.size() && (line[j] == ' ' || line[j] == '\t')) ++j;
                if (j < line.size() && line[j] == ':') {
                    ++j;
                    while (j < line.size() && (line[j] == ' ' || line[j] == '\t')) ++j;
                    if (j < line.size() && line[j] == '{') return j;
                }
            }
            i = s->second;
            continue;
        }
        ++i;
    }
    return std::nullopt;
}

}  // namespace detail

/// Extracts one ScriptAddition per Added line that forms a `"name": "value"`
/// entry inside the scripts object. Entries whose membership cannot be
/// determined from the hunk's own context are included with
/// `low_confidence = true`. Throws WrongFileKind unless `file.kind` is
/// Manifest.
inline std::vector<ScriptAddition> extract_manifest_script_additions(const FileChange& file) {
    if (file.kind != FileKind::Manifest) {
        throw WrongFileKind("extract_manifest_script_additions: '" + file.path +
                            "' is not a package.json manifest");
    }

    std::vector<ScriptAddition> additions;
    for (const auto& hunk : file.hunks) {
        detail::ScriptsContextTracker tracker(hunk.new_start <= 1);
        for (const auto& line : hunk.lines) {
            if (line.tag == LineTag::Removed) continue;  // old-image structure

            const auto membership = tracker.current_membership();
            if (line.tag == LineTag::Added) {
                if (const auto inline_brace = detail::scripts_open_brace(line.content)) {
                    // Whole (or partial) scripts object added on one line.
                    std::vector<detail::ScriptEntry> inline_entries;
                    detail::collect_inline_entries(line.content, *inline_brace, inline_entries);
                    for (auto& e : inline_entries) {
                        additions.push_back(ScriptAddition{std::move(e.name), std::move(e.command),
                                                           line.new_lineno.value_or(0), file.path,
                                                           false});
                    }
                } else if (auto entry = detail::match_script_entry(line.content)) {
                    if (membership == detail::ScriptsContextTracker::Membership::In) {
                        additions.push_back(ScriptAddition{std::move(entry->name),
                                                           std::move(entry->command),
                                                           line.new_lineno.value_or(0), file.path,
                                                           false});
                    } else if (membership == detail::ScriptsContextTracker::Membership::Unknown) {
                        additions.push_back(ScriptAddition{std::move(entry->name),
                                                           std::move(entry->command),
                                                           line.new_lineno.value_or(0), file.path,
                                                           true});
                    }
                }
            }
            tracker.feed(line.content);
        }
    }
    return additions;
}

}  // namespace tailguard
