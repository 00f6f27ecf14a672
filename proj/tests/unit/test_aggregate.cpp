#include <catch2/catch_amalgamated.hpp>

#include <numeric>

#include "support/generators.hpp"
#include "tailguard/ingest/corpus_io.hpp"
#include "tailguard/stats/aggregate.hpp"

using namespace tailguard;

TEST_CASE("pct_half_up", "[aggregate]") {
    CHECK(pct_half_up(0, 0) == 0);
    CHECK(pct_half_up(0, 7) == 0);
    CHECK(pct_half_up(7, 7) == 100);
    CHECK(pct_half_up(1, 2) == 50);
    CHECK(pct_half_up(1, 3) == 33);
    CHECK(pct_half_up(2, 3) == 67);
    CHECK(pct_half_up(1, 200) == 1);   // 0.5% rounds up
    CHECK(pct_half_up(1, 201) == 0);   // just below half
    CHECK(pct_half_up(405, 500) == 81);
    CHECK(pct_half_up(402, 500) == 80);
    CHECK(pct_half_up(220, 500) == 44);
}

TEST_CASE("stats_from_counts display rules", "[aggregate]") {
    SECTION("mean is truncated, not rounded") {
        const auto s = stats_from_counts({1, 2, 2});
        CHECK(s.total == 5);
        CHECK(s.lib_count == 3);
        CHECK(s.mean == Catch::Approx(5.0 / 3.0));
        CHECK(s.mean_display == "1.66");
        CHECK(s.median_display == "2.0");
    }
    SECTION("exact two-decimal means survive") {
        const auto s = stats_from_counts({1, 1, 1, 2});
        CHECK(s.mean_display == "1.25");
        CHECK(s.median_display == "1.0");
    }
    SECTION("median uses one decimal and supports halves") {
        CHECK(stats_from_counts({1, 2}).median_display == "1.5");
        CHECK(stats_from_counts({2, 2}).median_display == "2.0");
        CHECK(stats_from_counts({1, 2, 3, 10}).median_display == "2.5");
        CHECK(stats_from_counts({5}).median_display == "5.0");
    }
    SECTION("degenerate single zero library") {
        const auto s = stats_from_counts({0});
        CHECK(s.mean_display == "0.00");
        CHECK(s.median_display == "0.0");
        CHECK(s.sd_display == "0.00");
        CHECK(s.sample_sd == 0.0);
    }
    SECTION("standard deviations") {
        const auto s = stats_from_counts({1, 3});
        CHECK(s.sd == Catch::Approx(1.0));
        CHECK(s.sample_sd == Catch::Approx(std::sqrt(2.0)));
        CHECK(s.sd_display == "1.00");
    }
    SECTION("empty input throws") {
        CHECK_THROWS_AS(stats_from_counts({}), EmptyTierSample);
    }
}

TEST_CASE("published per-library means come out of integer display math",
          "[aggregate]") {
    const std::pair<std::uint64_t, const char*> cases[] = {
        {6167, "12.33"}, {5212, "10.42"}, {1086, "2.17"},
        {29283, "58.56"}, {28088, "56.17"}, {6458, "12.91"},
    };
    for (const auto& [total, want] : cases) {
        const auto counts = testsupport::distribute(total, 500);
        const auto s = stats_from_counts(counts);
        CAPTURE(total);
        CHECK(s.total == total);
        CHECK(s.lib_count == 500);
        CHECK(s.mean_display == want);
    }
}

TEST_CASE("statistics scale linearly", "[aggregate][property]") {
    testsupport::Rng rng(4242);
    for (int round = 0; round < 50; ++round) {
        std::vector<std::uint64_t> counts;
        const std::size_t n = 1 + rng.index(30);
        for (std::size_t i = 0; i < n; ++i) counts.push_back(rng.between(0, 40));
        const std::uint64_t k = rng.between(2, 9);
        std::vector<std::uint64_t> scaled = counts;
        for (auto& c : scaled) c *= k;

        const auto base = stats_from_counts(counts);
        const auto big = stats_from_counts(scaled);
        CAPTURE(round, n, k);
        CHECK(big.total == base.total * k);
        CHECK(big.mean == Catch::Approx(base.mean * static_cast<double>(k)));
        CHECK(big.median == Catch::Approx(base.median * static_cast<double>(k)));
        CHECK(big.sd == Catch::Approx(base.sd * static_cast<double>(k)).margin(1e-9));
        // mean times library count recovers the total
        CHECK(base.mean * static_cast<double>(base.lib_count) ==
              Catch::Approx(static_cast<double>(base.total)));
    }
}

namespace {

PullRequest make_pr(const std::string& id, Outcome outcome, const std::string& title,
                    std::vector<FileChange> files) {
    PullRequest pr;
    pr.id = id;
    pr.title = title;
    pr.outcome = outcome;
    pr.files = std::move(files);
    return pr;
}

FileChange safe_js() {
    return make_file_change("safe.js", "@@ -1 +1,2 @@\n x\n+const y = 1;\n");
}

FileChange docs_md() {
    return make_file_change("README.md", "@@ -1 +1,2 @@\n x\n+More.\n");
}

}  // namespace

TEST_CASE("per_lib_pr_stats counts via the report index", "[aggregate]") {
    LibraryRecord a;
    a.name = "a";
    a.pulls = {
        make_pr("a#1", Outcome::Merged, "Update dependency", {testsupport::unsafe_js_file()}),
        make_pr("a#2", Outcome::Merged, "Safe tweak", {safe_js()}),
        make_pr("a#3", Outcome::Merged, "Docs", {docs_md()}),
    };
    LibraryRecord b;
    b.name = "b";
    b.pulls = {
        make_pr("b#1", Outcome::Closed, "Update dependency", {testsupport::unsafe_js_file()}),
    };

    std::vector<UnsafeReport> reports;
    for (const auto* lib : {&a, &b})
        for (const auto& pr : lib->pulls) reports.push_back(scan_pull_request(pr));
    const auto index = index_reports(reports);

    const auto update = per_lib_pr_stats({a, b}, PrCounter::UpdateRelated, index);
    CHECK(update.total == 3);  // a#1, a#2, b#1 (docs PR is not update-related)
    CHECK(update.mean_display == "1.50");

    const auto unsafe = per_lib_pr_stats({a, b}, PrCounter::Unsafe, index);
    CHECK(unsafe.total == 2);
    CHECK(unsafe.median_display == "1.0");

    CHECK_THROWS_AS(per_lib_pr_stats({}, PrCounter::Unsafe, index), EmptyTierSample);
}

TEST_CASE("tier rows carry consistent tallies", "[aggregate]") {
    Corpus corpus;
    LibraryRecord top;
    top.name = "top-lib";
    top.dependents = 100000;
    top.dependents_rank = 1;
    top.pulls = {
        make_pr("top#1", Outcome::Merged, "Update dependency", {testsupport::unsafe_js_file()}),
        make_pr("top#2", Outcome::Closed, "Update dependency", {testsupport::unsafe_js_file()}),
        make_pr("top#3", Outcome::Opened, "Safe tweak", {safe_js()}),
    };
    LibraryRecord mid;
    mid.name = "mid-lib";
    mid.dependents = 700;
    mid.dependents_rank = 501;
    mid.pulls = {
        make_pr("mid#1", Outcome::Merged, "Update dependency", {testsupport::unsafe_js_file()}),
    };
    LibraryRecord bottom;
    bottom.name = "bottom-lib";
    bottom.dependents = 1;
    bottom.dependents_rank = 502;
    bottom.pulls = {
        make_pr("bot#1", Outcome::Opened, "Docs", {docs_md()}),
    };
    corpus.libraries = {top, mid, bottom};

    std::vector<UnsafeReport> reports;
    for (const auto& lib : corpus.libraries)
        for (const auto& pr : lib.pulls) reports.push_back(scan_pull_request(pr));

    TierConfig cfg;
    cfg.sample_per_tier = 0;  // denominators from actual tier sizes
    const auto rows = prevalence_summary(corpus, reports, cfg);
    REQUIRE(rows.size() == 3);

    const auto& top_row = rows[0];
    CHECK(top_row.tier == Tier::Top);
    CHECK(top_row.lib_count == 1);
    CHECK(top_row.update_related_pr_count == 3);
    CHECK(top_row.unsafe_pr_count == 2);
    CHECK(top_row.unsafe_lib_count == 1);
    CHECK(top_row.unsafe_lib_percent == 100);
    CHECK(top_row.outcome_counts.at(Outcome::Merged) == 1);
    CHECK(top_row.outcome_counts.at(Outcome::Closed) == 1);
    CHECK(top_row.outcome_counts.at(Outcome::Opened) == 0);
    CHECK(top_row.unsafe_stats.mean_display == "2.00");
    CHECK(top_row.feature_counts.at(UnsafeFeature::RequireUse) == 2);
    CHECK(top_row.feature_counts.at(UnsafeFeature::EvalUse) == 0);

    const auto& mid_row = rows[1];
    CHECK(mid_row.tier == Tier::Middle);
    CHECK(mid_row.unsafe_pr_count == 1);
    CHECK(outcome_percent(mid_row, Outcome::Merged) == 100);
    CHECK(outcome_percent(mid_row, Outcome::Opened) == 0);

    const auto& bottom_row = rows[2];
    CHECK(bottom_row.tier == Tier::Bottom);
    CHECK(bottom_row.lib_count == 1);
    CHECK(bottom_row.unsafe_pr_count == 0);
    CHECK(bottom_row.unsafe_lib_percent == 0);
    CHECK(outcome_percent(bottom_row, Outcome::Merged) == 0);  // denominator zero

    for (const auto& row : rows) {
        std::uint64_t outcome_total = 0;
        for (const auto& [outcome, count] : row.outcome_counts) outcome_total += count;
        CHECK(outcome_total == row.unsafe_pr_count);
    }
}

TEST_CASE("attention split only covers merged and closed unsafe PRs", "[aggregate]") {
    Corpus corpus;
    LibraryRecord lib;
    lib.name = "lib";
    lib.dependents = 99999;
    lib.dependents_rank = 1;
    lib.pulls = {
        make_pr("p#1", Outcome::Merged, "BREAKING: update runtime",
                {testsupport::unsafe_js_file()}),
        make_pr("p#2", Outcome::Closed, "Update dependency", {testsupport::unsafe_js_file()}),
        make_pr("p#3", Outcome::Opened, "BREAKING: update again",
                {testsupport::unsafe_js_file()}),
        make_pr("p#4", Outcome::Merged, "BREAKING: safe text only", {safe_js()}),
    };
    corpus.libraries = {lib};

    const auto taxonomy = default_taxonomy();
    std::vector<UnsafeReport> reports;
    std::vector<ClassificationResult> classifications;
    for (const auto& pr : corpus.libraries[0].pulls) {
        reports.push_back(scan_pull_request(pr));
        classifications.push_back(classify_change_types(pr, taxonomy));
    }

    const auto rows = attention_breakdown(corpus, reports, classifications);
    const auto& split = rows[0].attention_split;
    // p#3 is open, p#4 is not unsafe: both excluded.
    CHECK(split.merged_closed_total == 2);
    CHECK(split.with_total == 1);
    CHECK(split.without_total == 1);
    CHECK(split.with_counts.at(ChangeType::Feature) == 1);
    CHECK(split.without_counts.at(ChangeType::Feature) == 1);
    CHECK(split.with_counts.at(ChangeType::Bug) == 0);
    CHECK(split.with_total + split.without_total == split.merged_closed_total);
    CHECK(split.merged_closed_total == rows[0].outcome_counts.at(Outcome::Merged) +
                                           rows[0].outcome_counts.at(Outcome::Closed));
}

TEST_CASE("feature_frequency counts presence per PR", "[aggregate]") {
    // Two require lines in one PR still count once.
    const auto pr = make_pr(
        "x#1", Outcome::Merged, "Update",
        {make_file_change("a.js",
                          "@@ -1 +1,3 @@\n x\n+const a = require(\"x\");\n+const b = "
                          "require(\"y\");\n")});
    const auto freq = feature_frequency({scan_pull_request(pr)});
    CHECK(freq.at(UnsafeFeature::RequireUse) == 1);
    CHECK(freq.size() == std::size(kAllFeatures));  // zero-filled
    CHECK(freq.at(UnsafeFeature::NewScripts) == 0);
}

TEST_CASE("types_by_count orders by count then enum", "[aggregate]") {
    std::map<ChangeType, std::uint64_t> counts{
        {ChangeType::Feature, 5}, {ChangeType::Bug, 7},      {ChangeType::TestCases, 5},
        {ChangeType::Refactoring, 0}, {ChangeType::Documentation, 0}, {ChangeType::Other, 1},
    };
    const auto ordered = types_by_count(counts);
    REQUIRE(ordered.size() == 6);
    CHECK(ordered[0].first == ChangeType::Bug);
    CHECK(ordered[1].first == ChangeType::Feature);   // tie with TestCases: enum order
    CHECK(ordered[2].first == ChangeType::TestCases);
    CHECK(ordered[3].first == ChangeType::Other);
    CHECK(ordered[4].first == ChangeType::Refactoring);
    CHECK(ordered[5].first == ChangeType::Documentation);
}
