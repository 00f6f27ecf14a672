// tailguard command-line tool.
//
// Subcommands:
//   ingest   fetch PRs from a forge into an offline corpus file
//   scan     run detector + classifier + statistics over a corpus
//   rules    print the detection rule catalog
//   version  print tool and rule-catalog versions
//
// Exit codes: 0 success; 2 partial ingest (some repos failed); 64 usage;
// 65 corpus/schema error; 74 I/O error; 78 configuration error.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "tailguard/tailguard.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitPartial = 2;
constexpr int kExitUsage = 64;
constexpr int kExitCorpus = 65;
constexpr int kExitIo = 74;
constexpr int kExitConfig = 78;

struct IngestArgs {
    std::vector<std::string> repos;
    std::string repos_file;
    std::string out;
    std::string token;
    std::string base_url = "https://api.github.com";
    std::optional<std::string> since;
    std::size_t page_size = 100;
    std::size_t max_in_flight = 4;
    std::size_t retry_budget = 3;
};

struct ScanArgs {
    std::string corpus;
    std::string tiers_csv;
    std::string taxonomy;
    std::string tier_config;
    std::string format = "md";
    std::string out;
    std::string plot;
    bool strict = false;
    bool strict_js = false;
    bool raw_regex = false;
};

bool write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) return false;
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    out.flush();
    return static_cast<bool>(out);
}

tailguard::TierConfig load_tier_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw tailguard::ConfigError("cannot open tier config: " + path);
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw tailguard::ConfigError("tier config is not valid JSON: " + std::string(e.what()));
    }
    if (!doc.is_object()) throw tailguard::ConfigError("tier config must be a JSON object");

    tailguard::TierConfig cfg;
    for (const auto& [key, value] : doc.items()) {
        if (!value.is_number_unsigned() && !value.is_number_integer())
            throw tailguard::ConfigError("tier config key '" + key + "' must be an integer");
        if (value.is_number_integer() && value.get<std::int64_t>() < 0)
            throw tailguard::ConfigError("tier config key '" + key + "' must be non-negative");
        const auto n = value.get<std::uint64_t>();
        if (key == "top_n") {
            cfg.top_n = static_cast<std::size_t>(n);
        } else if (key == "middle_low") {
            cfg.middle_low = n;
        } else if (key == "middle_high") {
            cfg.middle_high = n;
        } else if (key == "bottom_dependents") {
            cfg.bottom_dependents = n;
        } else if (key == "sample_per_tier") {
            cfg.sample_per_tier = static_cast<std::size_t>(n);
        } else {
            throw tailguard::ConfigError("unknown tier config key: " + key);
        }
    }
    if (cfg.top_n < 1) throw tailguard::ConfigError("top_n must be at least 1");
    if (cfg.middle_low > cfg.middle_high)
        throw tailguard::ConfigError("middle_low must not exceed middle_high");
    return cfg;
}

std::vector<std::string> collect_repos(const IngestArgs& args) {
    std::vector<std::string> repos = args.repos;
    if (!args.repos_file.empty()) {
        std::ifstream in(args.repos_file);
        if (!in) throw tailguard::IoFailure("cannot open repos file: " + args.repos_file);
        std::string line;
        while (std::getline(in, line)) {
            if (!line.empty() && line.back() == '\r') line.pop_back();
            const auto start = line.find_first_not_of(" \t");
            if (start == std::string::npos) continue;
            const auto end = line.find_last_not_of(" \t");
            line = line.substr(start, end - start + 1);
            if (line.empty() || line[0] == '#') continue;
            repos.push_back(line);
        }
    }
    return repos;
}

int cmd_ingest(const IngestArgs& args) {
    std::vector<std::string> repos;
    try {
        repos = collect_repos(args);
    } catch (const tailguard::IoFailure& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    }
    if (repos.empty()) {
        std::cerr << "error: no repositories given (use --repo or --repos-file)\n";
        return kExitUsage;
    }

    std::string token = args.token;
    if (token.empty()) {
        if (const char* env = std::getenv("TAILGUARD_TOKEN")) token = env;
    }

    tailguard::Corpus corpus;
    if (std::ifstream(args.out).good()) {
        try {
            corpus = tailguard::load_corpus(args.out).corpus;
        } catch (const std::exception& e) {
            std::cerr << "error: existing corpus is unreadable: " << e.what() << "\n";
            return kExitCorpus;
        }
    }

    tailguard::FetchPolicy policy;
    policy.max_in_flight = args.max_in_flight;
    policy.retry_budget = args.retry_budget;
    policy.since = args.since;
    policy.page_size = args.page_size;

    const tailguard::ForgeClient client(args.base_url, token);
    std::vector<std::string> failures;
    for (const auto& repo : repos) {
        try {
            auto pulls = client.fetch_repo_pull_requests(
                repo, policy, [&repo](const tailguard::FetchProgress& p) {
                    std::cerr << repo << ": page " << p.page << ", " << p.pulls_seen
                              << " PRs\n";
                });
            bool replaced = false;
            for (auto& lib : corpus.libraries) {
                if (lib.name == repo) {
                    lib.pulls = std::move(pulls);
                    replaced = true;
                    break;
                }
            }
            if (!replaced) {
                tailguard::LibraryRecord lib;
                lib.name = repo;
                lib.pulls = std::move(pulls);
                corpus.libraries.push_back(std::move(lib));
            }
        } catch (const tailguard::FetchError& e) {
            failures.push_back(repo + ": " + e.what());
        }
    }

    try {
        tailguard::save_corpus(corpus, args.out);
    } catch (const tailguard::IoFailure& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    }

    if (!failures.empty()) {
        std::cerr << "failed repositories:\n";
        for (const auto& f : failures) std::cerr << "  " << f << "\n";
        return kExitPartial;
    }
    return kExitOk;
}

int cmd_scan(const ScanArgs& args) {
    tailguard::LoadOptions load_options;
    load_options.strict = args.strict;
    load_options.js_mode = args.strict_js ? tailguard::JsExtensionMode::JsOnly
                                          : tailguard::JsExtensionMode::Extended;

    tailguard::LoadResult loaded;
    try {
        loaded = tailguard::load_corpus(args.corpus, load_options);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitCorpus;
    }
    for (const auto& issue : loaded.issues)
        std::cerr << args.corpus << ":" << issue.line_no << ": skipped: " << issue.message
                  << "\n";

    tailguard::KeywordTaxonomy taxonomy;
    tailguard::TierConfig tier_config;
    try {
        taxonomy = args.taxonomy.empty() ? tailguard::default_taxonomy()
                                         : tailguard::load_taxonomy_file(args.taxonomy);
        if (!args.tier_config.empty()) tier_config = load_tier_config(args.tier_config);
    } catch (const tailguard::ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    }

    if (!args.tiers_csv.empty()) {
        try {
            const auto table = tailguard::load_dependents_csv(args.tiers_csv);
            tailguard::apply_dependents(loaded.corpus, table);
        } catch (const std::exception& e) {
            std::cerr << "error: " << e.what() << "\n";
            return kExitIo;
        }
    }

    tailguard::DetectorOptions detector;
    detector.raw_regex = args.raw_regex;

    const auto bundle =
        tailguard::build_report_bundle(loaded.corpus, taxonomy, detector, tier_config);
    const std::string rendered =
        tailguard::emit_report(bundle, tailguard::parse_format(args.format));

    if (args.out.empty()) {
        std::cout << rendered;
    } else if (!write_text_file(args.out, rendered)) {
        std::cerr << "error: cannot write report: " << args.out << "\n";
        return kExitIo;
    }
    if (!args.plot.empty() &&
        !write_text_file(args.plot, tailguard::render_feature_frequency_svg(bundle))) {
        std::cerr << "error: cannot write plot: " << args.plot << "\n";
        return kExitIo;
    }
    return kExitOk;
}

int cmd_rules() {
    std::cout << "rule catalog " << tailguard::kRuleCatalogVersion << "\n";
    for (const auto& rule : tailguard::kRuleCatalog) {
        std::cout << rule.id << "  " << tailguard::to_string(rule.feature) << "\n";
        std::cout << "    " << rule.description << "\n";
        std::cout << "    default: "
                  << (rule.default_pattern.empty() ? "(structural)" : rule.default_pattern)
                  << "\n";
        std::cout << "    raw:     "
                  << (rule.raw_pattern.empty() ? "(structural)" : rule.raw_pattern) << "\n";
    }
    return kExitOk;
}

int cmd_version() {
    std::cout << "tailguard " << tailguard::kToolVersion << " (rule catalog "
              << tailguard::kRuleCatalogVersion << ")\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Flags unsafe dependency-update pull requests"};
    app.require_subcommand(1);

    IngestArgs ingest_args;
    auto* ingest = app.add_subcommand("ingest", "Fetch PRs into an offline corpus");
    ingest->add_option("--repo", ingest_args.repos, "Repository as owner/name (repeatable)");
    ingest->add_option("--repos-file", ingest_args.repos_file,
                       "File with one owner/name per line (# comments)");
    ingest->add_option("--out", ingest_args.out, "Corpus file to write or extend")->required();
    ingest->add_option("--token", ingest_args.token,
                       "API token (default: TAILGUARD_TOKEN env var)");
    ingest->add_option("--base-url", ingest_args.base_url, "Forge API base URL");
    ingest->add_option("--since", ingest_args.since, "Only PRs created at or after (ISO-8601)");
    ingest->add_option("--page-size", ingest_args.page_size, "Listing page size");
    ingest->add_option("--max-in-flight", ingest_args.max_in_flight,
                       "Concurrent per-PR file fetches");
    ingest->add_option("--retry-budget", ingest_args.retry_budget,
                       "Retries for transient failures");

    ScanArgs scan_args;
    auto* scan = app.add_subcommand("scan", "Analyze a corpus and emit a report");
    scan->add_option("--corpus", scan_args.corpus, "Corpus file (NDJSON)")->required();
    scan->add_option("--tiers-csv", scan_args.tiers_csv,
                     "CSV with name,dependents columns to override dependents");
    scan->add_option("--taxonomy", scan_args.taxonomy, "Keyword taxonomy JSON file");
    scan->add_option("--tier-config", scan_args.tier_config, "Tier thresholds JSON file");
    scan->add_option("--format", scan_args.format, "Output format")
        ->check(CLI::IsMember({"json", "csv", "md"}));
    scan->add_option("--out", scan_args.out, "Write report here instead of stdout");
    scan->add_option("--plot", scan_args.plot, "Write feature-frequency SVG here");
    scan->add_flag("--strict", scan_args.strict, "Fail on the first invalid corpus record");
    scan->add_flag("--strict-js", scan_args.strict_js,
                   "Treat only .js files as JavaScript (not .jsx/.mjs/.cjs)");
    scan->add_flag("--raw-regex", scan_args.raw_regex,
                   "Bare substring patterns without word-boundary or string-literal handling");

    auto* rules = app.add_subcommand("rules", "Print the detection rule catalog");
    auto* version = app.add_subcommand("version", "Print version information");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    if (ingest->parsed()) return cmd_ingest(ingest_args);
    if (scan->parsed()) return cmd_scan(scan_args);
    if (rules->parsed()) return cmd_rules();
    if (version->parsed()) return cmd_version();
    return kExitUsage;
}
