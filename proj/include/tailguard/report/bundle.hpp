#pragma once

// Assembles everything the report emitters need: per-tier rows (library and
// update-related counts, prevalence, outcomes, attention splits), the
// corpus-wide feature-frequency figure, and a reproducibility stamp.

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "tailguard/classify/classifier.hpp"
#include "tailguard/classify/taxonomy.hpp"
#include "tailguard/core/model.hpp"
#include "tailguard/detect/rules.hpp"
#include "tailguard/detect/scanner.hpp"
#include "tailguard/stats/aggregate.hpp"
#include "tailguard/stats/tiers.hpp"
#include "tailguard/version.hpp"

namespace tailguard {

struct ReportMetadata {
    std::string tool_version;
    std::string rule_catalog_version;
    std::string taxonomy_hash;
    std::string corpus_snapshot_at;  // empty when the corpus has none

    bool operator==(const ReportMetadata&) const = default;
};

struct ReportBundle {
    ReportMetadata metadata;
    TierConfig tier_config;
    std::vector<TierStats> tiers;  // Top, Middle, Bottom; feeds all four tables
    std::map<UnsafeFeature, std::uint64_t> feature_totals;  // corpus-wide figure data

    std::size_t library_count = 0;
    std::size_t pr_count = 0;
    std::uint64_t update_related_total = 0;
    std::uint64_t unsafe_total = 0;
};

/// Figure ordering: descending frequency, ties in catalog order.
inline std::vector<std::pair<UnsafeFeature, std::uint64_t>> feature_totals_ordered(
    const ReportBundle& bundle) {
    std::vector<std::pair<UnsafeFeature, std::uint64_t>> out(bundle.feature_totals.begin(),
                                                             bundle.feature_totals.end());
    std::stable_sort(out.begin(), out.end(),
                     [](const auto& a, const auto& b) { return a.second > b.second; });
    return out;
}

/// Runs detector, classifier, and aggregation over the corpus. Libraries
/// get dependence ranks here when any are missing (tier assignment needs
/// them).
inline ReportBundle build_report_bundle(Corpus& corpus, const KeywordTaxonomy& taxonomy,
                                        const DetectorOptions& detector = {},
                                        const TierConfig& tier_config = {}) {
    bool ranked = true;
    for (const auto& lib : corpus.libraries) {
        if (!lib.dependents_rank.has_value()) {
            ranked = false;
            break;
        }
    }
    if (!ranked) rank_libraries(corpus);

    std::vector<UnsafeReport> reports;
    std::vector<ClassificationResult> classifications;
    reports.reserve(corpus.pr_count());
    classifications.reserve(corpus.pr_count());
    for (const auto& lib : corpus.libraries) {
        for (const auto& pr : lib.pulls) {
            reports.push_back(scan_pull_request(pr, detector));
            classifications.push_back(classify_change_types(pr, taxonomy));
        }
    }

    ReportBundle bundle;
    bundle.metadata.tool_version = std::string(kToolVersion);
    bundle.metadata.rule_catalog_version = std::string(kRuleCatalogVersion);
    bundle.metadata.taxonomy_hash = taxonomy.content_hash();
    bundle.metadata.corpus_snapshot_at = corpus.snapshot_at.value_or("");
    bundle.tier_config = tier_config;
    bundle.tiers = attention_breakdown(corpus, reports, classifications, tier_config);
    bundle.feature_totals = feature_frequency(reports);

    bundle.library_count = corpus.libraries.size();
    bundle.pr_count = corpus.pr_count();
    for (const auto& report : reports) {
        if (report.update_related) ++bundle.update_related_total;
        if (report.unsafe()) ++bundle.unsafe_total;
    }
    return bundle;
}

}  // namespace tailguard
