#pragma once

// Offline corpus storage: newline-delimited JSON, one record per PR.
//
//   {"schema_version":1,
//    "library":{"name":...,"dependents":...},
//    "pr":{"id":...,"title":...,"body":...,"outcome":"merged|closed|opened",
//          "created_at":...|null,"files":[{"path":...,"patch":...}]}}
//
// Saves are deterministic (libraries by name, pulls by id, compact JSON) and
// go through a temp file plus rename so a crash never leaves a truncated
// corpus behind. Derived fields (file kind, parsed hunks, repo) are not
// stored; the loader reconstructs them. Corpus-level snapshot_at is held in
// memory only: schema v1 has no header record, and an empty corpus must save
// to an empty file. A library with zero PRs has no line of its own and
// therefore does not survive a save/load cycle.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "tailguard/core/model.hpp"
#include "tailguard/core/validate.hpp"
#include "tailguard/diff/file_kind.hpp"
#include "tailguard/diff/unified_diff.hpp"

namespace tailguard {

class FileMissing : public std::runtime_error {
public:
    explicit FileMissing(const std::string& path)
        : std::runtime_error("corpus file not found: " + path) {}
};

class SchemaVersionUnsupported : public std::runtime_error {
public:
    explicit SchemaVersionUnsupported(std::int64_t found)
        : std::runtime_error("unsupported corpus schema_version " + std::to_string(found) +
                             " (expected 1)") {}
};

class FirstInvalidRecord : public std::runtime_error {
public:
    FirstInvalidRecord(std::size_t line_no, const std::string& message)
        : std::runtime_error("line " + std::to_string(line_no) + ": " + message),
          line_no(line_no) {}
    std::size_t line_no;
};

class IoFailure : public std::runtime_error {
public:
    explicit IoFailure(const std::string& what) : std::runtime_error(what) {}
};

struct LoadIssue {
    std::size_t line_no = 0;
    std::string message;

    bool operator==(const LoadIssue&) const = default;
};

struct LoadOptions {
    bool strict = false;
    JsExtensionMode js_mode = JsExtensionMode::Extended;
};

struct LoadResult {
    Corpus corpus;
    std::vector<LoadIssue> issues;
};

/// Builds a fully derived FileChange from the two stored fields. Patches
/// that fail to parse keep their verbatim text, get no hunks, and carry a
/// parse warning instead of failing the load.
inline FileChange make_file_change(std::string path, std::string patch,
                                   JsExtensionMode mode = JsExtensionMode::Extended) {
    FileChange fc;
    fc.kind = classify_file_change(path, mode);
    fc.path = std::move(path);
    fc.patch = std::move(patch);
    try {
        ParsedPatch parsed = parse_unified_diff(fc.patch);
        fc.hunks = std::move(parsed.hunks);
        fc.parse_warning = parsed.truncated;
    } catch (const MalformedHunkHeader&) {
        fc.parse_warning = true;
    }
    return fc;
}

namespace detail {

inline const nlohmann::json& require_field(const nlohmann::json& obj, const char* key) {
    const auto it = obj.find(key);
    if (it == obj.end()) throw std::runtime_error(std::string("missing field '") + key + "'");
    return *it;
}

inline std::string require_string(const nlohmann::json& obj, const char* key) {
    const auto& v = require_field(obj, key);
    if (!v.is_string()) throw std::runtime_error(std::string("field '") + key + "' must be a string");
    return v.get<std::string>();
}

inline Outcome parse_outcome(const std::string& text) {
    if (text == "merged") return Outcome::Merged;
    if (text == "closed") return Outcome::Closed;
    if (text == "opened") return Outcome::Opened;
    throw std::runtime_error("unknown outcome '" + text + "'");
}

struct ParsedRecord {
    std::string library;
    std::uint64_t dependents = 0;
    PullRequest pr;
};

inline ParsedRecord parse_record(const nlohmann::json& doc, JsExtensionMode js_mode) {
    if (!doc.is_object()) throw std::runtime_error("record is not a JSON object");
    const auto& version = require_field(doc, "schema_version");
    if (!version.is_number_integer()) throw std::runtime_error("schema_version must be an integer");
    if (version.get<std::int64_t>() != 1)
        throw SchemaVersionUnsupported(version.get<std::int64_t>());

    ParsedRecord rec;
    const auto& lib = require_field(doc, "library");
    if (!lib.is_object()) throw std::runtime_error("'library' must be an object");
    rec.library = require_string(lib, "name");
    const auto& dependents = require_field(lib, "dependents");
    if (!dependents.is_number_unsigned() && !dependents.is_number_integer())
        throw std::runtime_error("field 'dependents' must be an integer");
    if (dependents.is_number_integer() && dependents.get<std::int64_t>() < 0)
        throw std::runtime_error("field 'dependents' must be non-negative");
    rec.dependents = dependents.get<std::uint64_t>();

    const auto& pr = require_field(doc, "pr");
    if (!pr.is_object()) throw std::runtime_error("'pr' must be an object");
    rec.pr.id = require_string(pr, "id");
    rec.pr.repo = rec.library;
    rec.pr.title = require_string(pr, "title");
    rec.pr.body = require_string(pr, "body");
    rec.pr.outcome = parse_outcome(require_string(pr, "outcome"));
    const auto& created = require_field(pr, "created_at");
    if (created.is_null()) {
        rec.pr.created_at.reset();
    } else if (created.is_string()) {
        rec.pr.created_at = created.get<std::string>();
    } else {
        throw std::runtime_error("field 'created_at' must be a string or null");
    }
    const auto& files = require_field(pr, "files");
    if (!files.is_array()) throw std::runtime_error("'files' must be an array");
    for (const auto& file : files) {
        if (!file.is_object()) throw std::runtime_error("file entry is not a JSON object");
        rec.pr.files.push_back(
            make_file_change(require_string(file, "path"), require_string(file, "patch"), js_mode));
    }
    return rec;
}

}  // namespace detail

inline LoadResult load_corpus(const std::string& path, const LoadOptions& options = {}) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FileMissing(path);

    LoadResult result;
    std::map<std::string, LibraryRecord> by_name;

    std::string line;
    std::size_t line_no = 0;
    const auto report = [&](const std::string& message) {
        if (options.strict) throw FirstInvalidRecord(line_no, message);
        result.issues.push_back({line_no, message});
    };

    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;

        nlohmann::json doc;
        try {
            doc = nlohmann::json::parse(line);
        } catch (const nlohmann::json::parse_error& e) {
            report(std::string("invalid JSON: ") + e.what());
            continue;
        }
        detail::ParsedRecord rec;
        try {
            rec = detail::parse_record(doc, options.js_mode);
        } catch (const SchemaVersionUnsupported&) {
            throw;  // a different format, not a bad record
        } catch (const std::exception& e) {
            report(e.what());
            continue;
        }

        const auto violations =
            validate_pull_request(rec.pr, ValidationOptions{options.js_mode});
        if (!violations.empty()) {
            std::string joined = "invalid record:";
            for (const auto& v : violations) joined += " " + v + ";";
            report(joined);
            continue;
        }

        auto [it, inserted] = by_name.try_emplace(rec.library);
        if (inserted) {
            it->second.name = rec.library;
            it->second.dependents = rec.dependents;
        } else if (it->second.dependents != rec.dependents) {
            report("library '" + rec.library + "' repeats with different dependents; keeping " +
                   std::to_string(it->second.dependents));
        }
        it->second.pulls.push_back(std::move(rec.pr));
    }

    for (auto& [name, lib] : by_name) result.corpus.libraries.push_back(std::move(lib));
    result.corpus.normalize();
    return result;
}

/// Renders one corpus record as a compact JSON line (no trailing newline).
inline std::string serialize_record(const LibraryRecord& lib, const PullRequest& pr) {
    nlohmann::ordered_json doc;
    doc["schema_version"] = 1;
    doc["library"] = {{"name", lib.name}, {"dependents", lib.dependents}};
    nlohmann::ordered_json pr_doc;
    pr_doc["id"] = pr.id;
    pr_doc["title"] = pr.title;
    pr_doc["body"] = pr.body;
    pr_doc["outcome"] = to_string(pr.outcome);
    if (pr.created_at.has_value()) {
        pr_doc["created_at"] = *pr.created_at;
    } else {
        pr_doc["created_at"] = nullptr;
    }
    auto files = nlohmann::ordered_json::array();
    for (const auto& file : pr.files) {
        files.push_back({{"path", file.path}, {"patch", file.patch}});
    }
    pr_doc["files"] = std::move(files);
    doc["pr"] = std::move(pr_doc);
    return doc.dump(-1, ' ', false, nlohmann::json::error_handler_t::replace);
}

/// Full corpus rendering in canonical order.
inline std::string serialize_corpus(const Corpus& corpus) {
    Corpus canonical = corpus;
    canonical.normalize();
    std::string out;
    for (const auto& lib : canonical.libraries) {
        for (const auto& pr : lib.pulls) {
            out += serialize_record(lib, pr);
            out.push_back('\n');
        }
    }
    return out;
}

inline void save_corpus(const Corpus& corpus, const std::string& path) {
    const std::string payload = serialize_corpus(corpus);

    const std::filesystem::path target(path);
    std::random_device rd;
    std::ostringstream suffix;
    suffix << ".tmp-" << std::hex << rd();
    const std::filesystem::path temp = target.string() + suffix.str();

    {
        std::ofstream out(temp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoFailure("cannot open temp file for writing: " + temp.string());
        out.write(payload.data(), static_cast<std::streamsize>(payload.size()));
        out.flush();
        if (!out) {
            std::error_code ignore;
            std::filesystem::remove(temp, ignore);
            throw IoFailure("write failed: " + temp.string());
        }
    }
    std::error_code ec;
    std::filesystem::rename(temp, target, ec);
    if (ec) {
        std::error_code ignore;
        std::filesystem::remove(temp, ignore);
        throw IoFailure("rename to " + path + " failed: " + ec.message());
    }
}

/// Loads a (name, dependents) table from a CSV with a header row. Column
/// positions are discovered from the header, so extra columns are fine.
inline std::map<std::string, std::uint64_t> load_dependents_csv(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FileMissing(path);

    const auto split = [](const std::string& line) {
        std::vector<std::string> cells;
        std::string cell;
        bool quoted = false;
        for (std::size_t i = 0; i < line.size(); ++i) {
            const char c = line[i];
            if (quoted) {
                if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                    cell.push_back('"');
                    ++i;
                } else if (c == '"') {
                    quoted = false;
                } else {
                    cell.push_back(c);
                }
            } else if (c == '"') {
                quoted = true;
            } else if (c == ',') {
                cells.push_back(std::move(cell));
                cell.clear();
            } else {
                cell.push_back(c);
            }
        }
        cells.push_back(std::move(cell));
        return cells;
    };

    std::string line;
    if (!std::getline(in, line)) return {};
    if (!line.empty() && line.back() == '\r') line.pop_back();

    std::size_t name_col = SIZE_MAX;
    std::size_t dependents_col = SIZE_MAX;
    const auto header = split(line);
    for (std::size_t i = 0; i < header.size(); ++i) {
        std::string low = header[i];
        for (auto& c : low)
            if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
        if (low == "name") name_col = i;
        if (low == "dependents") dependents_col = i;
    }
    if (name_col == SIZE_MAX || dependents_col == SIZE_MAX)
        throw IoFailure("CSV header must contain 'name' and 'dependents' columns: " + path);

    std::map<std::string, std::uint64_t> table;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto cells = split(line);
        if (cells.size() <= std::max(name_col, dependents_col))
            throw IoFailure("CSV line " + std::to_string(line_no) + " has too few columns");
        try {
            table[cells[name_col]] = std::stoull(cells[dependents_col]);
        } catch (const std::exception&) {
            throw IoFailure("CSV line " + std::to_string(line_no) +
                            " has a non-numeric dependents value");
        }
    }
    return table;
}

/// Overwrites dependents counts from an external table; returns how many
/// libraries were matched.
inline std::size_t apply_dependents(Corpus& corpus,
                                    const std::map<std::string, std::uint64_t>& table) {
    std::size_t matched = 0;
    for (auto& lib : corpus.libraries) {
        const auto it = table.find(lib.name);
        if (it != table.end()) {
            lib.dependents = it->second;
            ++matched;
        }
    }
    return matched;
}

}  // namespace tailguard
