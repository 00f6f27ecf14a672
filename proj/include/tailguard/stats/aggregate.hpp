#pragma once

// Per-tier descriptive statistics. Display values follow two fixed rules
// that the downstream report relies on:
//   - means and standard deviations are TRUNCATED to two decimals,
//   - percentages are rounded half-up to whole percent, each cell
//     independently (rows are not forced to sum to 100).
// Mean and median displays are computed with integer arithmetic so
// truncation can never be disturbed by floating-point representation.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "tailguard/classify/classifier.hpp"
#include "tailguard/core/model.hpp"
#include "tailguard/detect/scanner.hpp"
#include "tailguard/stats/tiers.hpp"

namespace tailguard {

class EmptyTierSample : public std::runtime_error {
public:
    EmptyTierSample() : std::runtime_error("per-library statistics need at least one library") {}
};

/// Rounds num/den to a whole percentage, half away from zero, using integers
/// only. den == 0 yields 0.
inline int pct_half_up(std::uint64_t num, std::uint64_t den) {
    if (den == 0) return 0;
    return static_cast<int>((200 * num + den) / (2 * den));
}

struct PrStats {
    std::size_t lib_count = 0;
    std::uint64_t total = 0;
    double mean = 0.0;    // full precision
    double median = 0.0;  // full precision
    double sd = 0.0;      // population (divide by n)
    double sample_sd = 0.0;  // divide by n-1; 0 for a single library
    std::string mean_display = "0.00";
    std::string median_display = "0.0";
    std::string sd_display = "0.00";

    bool operator==(const PrStats&) const = default;
};

namespace detail {

inline std::string int_mean_display(std::uint64_t total, std::uint64_t count) {
    // truncated to 2 decimals: whole part, then hundredths of the remainder
    const std::uint64_t whole = total / count;
    const std::uint64_t cents = (total % count) * 100 / count;
    std::string out = std::to_string(whole);
    out.push_back('.');
    if (cents < 10) out.push_back('0');
    out += std::to_string(cents);
    return out;
}

inline std::string truncate2_display(double value) {
    // small epsilon so values that are exact in decimal survive binary noise
    const double scaled = std::floor(value * 100.0 + 1e-9);
    const auto cents_total = static_cast<std::uint64_t>(scaled < 0 ? 0 : scaled);
    std::string out = std::to_string(cents_total / 100);
    out.push_back('.');
    const std::uint64_t cents = cents_total % 100;
    if (cents < 10) out.push_back('0');
    out += std::to_string(cents);
    return out;
}

}  // namespace detail

/// Core statistic fold over one count per library.
inline PrStats stats_from_counts(std::vector<std::uint64_t> counts) {
    if (counts.empty()) throw EmptyTierSample();
    PrStats s;
    s.lib_count = counts.size();
    for (const auto c : counts) s.total += c;

    const auto n = static_cast<std::uint64_t>(counts.size());
    s.mean = static_cast<double>(s.total) / static_cast<double>(n);
    s.mean_display = detail::int_mean_display(s.total, n);

    std::sort(counts.begin(), counts.end());
    // doubled median stays integral for integer inputs, even for even n
    std::uint64_t median_x2 = 0;
    if (n % 2 == 1) {
        median_x2 = 2 * counts[n / 2];
    } else {
        median_x2 = counts[n / 2 - 1] + counts[n / 2];
    }
    s.median = static_cast<double>(median_x2) / 2.0;
    s.median_display = std::to_string(median_x2 / 2);
    s.median_display.push_back('.');
    s.median_display += (median_x2 % 2 == 0) ? "0" : "5";

    double sq_sum = 0.0;
    for (const auto c : counts) {
        const double d = static_cast<double>(c) - s.mean;
        sq_sum += d * d;
    }
    s.sd = std::sqrt(sq_sum / static_cast<double>(n));
    s.sample_sd = n > 1 ? std::sqrt(sq_sum / static_cast<double>(n - 1)) : 0.0;
    s.sd_display = detail::truncate2_display(s.sd);
    return s;
}

/// Which per-library PR count feeds the statistics.
enum class PrCounter { UpdateRelated, Unsafe };

/// Report lookup by PR id. Reports must cover every PR that gets counted.
using ReportIndex = std::map<std::string, const UnsafeReport*>;

inline ReportIndex index_reports(const std::vector<UnsafeReport>& reports) {
    ReportIndex index;
    for (const auto& report : reports) index.emplace(report.pr_id, &report);
    return index;
}

inline PrStats per_lib_pr_stats(const std::vector<LibraryRecord>& libs, PrCounter counter,
                                const ReportIndex& reports) {
    if (libs.empty()) throw EmptyTierSample();
    std::vector<std::uint64_t> counts;
    counts.reserve(libs.size());
    for (const auto& lib : libs) {
        std::uint64_t count = 0;
        for (const auto& pr : lib.pulls) {
            const auto* report = reports.at(pr.id);
            if (counter == PrCounter::UpdateRelated ? report->update_related : report->unsafe())
                ++count;
        }
        counts.push_back(count);
    }
    return stats_from_counts(std::move(counts));
}

struct AttentionSplit {
    std::map<ChangeType, std::uint64_t> with_counts;
    std::map<ChangeType, std::uint64_t> without_counts;
    std::uint64_t with_total = 0;
    std::uint64_t without_total = 0;
    std::uint64_t merged_closed_total = 0;

    bool operator==(const AttentionSplit&) const = default;
};

struct TierStats {
    Tier tier = Tier::Unsampled;
    std::size_t lib_count = 0;
    std::uint64_t update_related_pr_count = 0;
    std::size_t unsafe_lib_count = 0;
    std::uint64_t unsafe_pr_count = 0;
    int unsafe_lib_percent = 0;  // vs the configured per-tier sample size
    PrStats update_related_stats;
    PrStats unsafe_stats;
    std::map<Outcome, std::uint64_t> outcome_counts;
    std::map<UnsafeFeature, std::uint64_t> feature_counts;
    AttentionSplit attention_split;

    bool operator==(const TierStats&) const = default;
};

inline int outcome_percent(const TierStats& row, Outcome outcome) {
    const auto it = row.outcome_counts.find(outcome);
    const std::uint64_t count = it == row.outcome_counts.end() ? 0 : it->second;
    return pct_half_up(count, row.unsafe_pr_count);
}

namespace detail {

inline std::map<Outcome, std::uint64_t> zeroed_outcomes() {
    return {{Outcome::Merged, 0}, {Outcome::Closed, 0}, {Outcome::Opened, 0}};
}

inline std::map<UnsafeFeature, std::uint64_t> zeroed_features() {
    std::map<UnsafeFeature, std::uint64_t> m;
    for (const auto f : kAllFeatures) m[f] = 0;
    return m;
}

inline std::map<ChangeType, std::uint64_t> zeroed_types() {
    std::map<ChangeType, std::uint64_t> m;
    for (const auto t : kAllChangeTypes) m[t] = 0;
    return m;
}

/// One pass over the corpus producing every per-tier figure. The attention
/// split is only filled when classifications are supplied.
inline std::vector<TierStats> build_tier_stats(
    const Corpus& corpus, const ReportIndex& reports,
    const std::map<std::string, const ClassificationResult*>* classifications,
    const TierConfig& cfg) {
    std::map<Tier, std::vector<const LibraryRecord*>> by_tier;
    for (const auto& lib : corpus.libraries) by_tier[assign_tier(lib, cfg)].push_back(&lib);

    std::vector<TierStats> rows;
    for (const auto tier : kSampledTiers) {
        TierStats row;
        row.tier = tier;
        row.outcome_counts = zeroed_outcomes();
        row.feature_counts = zeroed_features();
        row.attention_split.with_counts = zeroed_types();
        row.attention_split.without_counts = zeroed_types();

        const auto& libs = by_tier[tier];
        row.lib_count = libs.size();

        std::vector<std::uint64_t> update_counts;
        std::vector<std::uint64_t> unsafe_counts;
        update_counts.reserve(libs.size());
        unsafe_counts.reserve(libs.size());

        for (const auto* lib : libs) {
            std::uint64_t updates = 0;
            std::uint64_t unsafe = 0;
            for (const auto& pr : lib->pulls) {
                const auto* report = reports.at(pr.id);
                if (report->update_related) ++updates;
                if (!report->unsafe()) continue;
                ++unsafe;
                ++row.outcome_counts[pr.outcome];
                for (const auto feature : report->features_present) ++row.feature_counts[feature];
                if (classifications != nullptr &&
                    (pr.outcome == Outcome::Merged || pr.outcome == Outcome::Closed)) {
                    const auto* labels = classifications->at(pr.id);
                    auto& split = row.attention_split;
                    ++split.merged_closed_total;
                    auto& bucket =
                        labels->attention ? split.with_counts : split.without_counts;
                    (labels->attention ? split.with_total : split.without_total) += 1;
                    for (const auto type : labels->types) ++bucket[type];
                }
            }
            update_counts.push_back(updates);
            unsafe_counts.push_back(unsafe);
            row.update_related_pr_count += updates;
            row.unsafe_pr_count += unsafe;
            if (unsafe > 0) ++row.unsafe_lib_count;
        }

        const std::size_t denom = cfg.sample_per_tier == 0 ? libs.size() : cfg.sample_per_tier;
        row.unsafe_lib_percent = pct_half_up(row.unsafe_lib_count, denom);

        if (!libs.empty()) {
            row.update_related_stats = stats_from_counts(update_counts);
            row.unsafe_stats = stats_from_counts(unsafe_counts);
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace detail

/// Per-tier prevalence rows: library counts, flagged-library percentage,
/// and per-library unsafe-PR statistics.
inline std::vector<TierStats> prevalence_summary(const Corpus& corpus,
                                                 const std::vector<UnsafeReport>& reports,
                                                 const TierConfig& cfg = {}) {
    const auto index = index_reports(reports);
    return detail::build_tier_stats(corpus, index, nullptr, cfg);
}

/// Per-tier outcome rows over unsafe PRs. Percentages come from
/// outcome_percent so emitters recompute rather than store them.
inline std::vector<TierStats> acceptance_summary(const Corpus& corpus,
                                                 const std::vector<UnsafeReport>& reports,
                                                 const TierConfig& cfg = {}) {
    const auto index = index_reports(reports);
    return detail::build_tier_stats(corpus, index, nullptr, cfg);
}

/// How many PRs exhibit each feature (presence counting: a PR adds at most
/// one per feature no matter how many hits it had).
inline std::map<UnsafeFeature, std::uint64_t> feature_frequency(
    const std::vector<UnsafeReport>& reports) {
    auto freq = detail::zeroed_features();
    for (const auto& report : reports) {
        for (const auto feature : report.features_present) ++freq[feature];
    }
    return freq;
}

/// Per-tier attention split over merged and closed unsafe PRs.
inline std::vector<TierStats> attention_breakdown(
    const Corpus& corpus, const std::vector<UnsafeReport>& reports,
    const std::vector<ClassificationResult>& classifications, const TierConfig& cfg = {}) {
    const auto index = index_reports(reports);
    std::map<std::string, const ClassificationResult*> labels;
    for (const auto& c : classifications) labels.emplace(c.pr_id, &c);
    return detail::build_tier_stats(corpus, index, &labels, cfg);
}

/// Change types ordered by descending count (ties keep enum order), the
/// order Table-style listings use.
inline std::vector<std::pair<ChangeType, std::uint64_t>> types_by_count(
    const std::map<ChangeType, std::uint64_t>& counts) {
    std::vector<std::pair<ChangeType, std::uint64_t>> out(counts.begin(), counts.end());
    std::stable_sort(out.begin(), out.end(),
                     [](const auto& a, const auto& b) { return a.second > b.second; });
    return out;
}

}  // namespace tailguard
