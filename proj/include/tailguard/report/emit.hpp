#pragma once

// Report rendering. All three formats draw from the same counts and
// recompute percentages at emission, so numeric content is identical across
// formats and byte-identical across runs.

#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "tailguard/report/bundle.hpp"
#include "tailguard/stats/aggregate.hpp"

namespace tailguard {

enum class ReportFormat { Json, Csv, Md };

class UnknownFormat : public std::runtime_error {
public:
    explicit UnknownFormat(const std::string& name)
        : std::runtime_error("unknown report format: " + name) {}
};

inline ReportFormat parse_format(const std::string& name) {
    if (name == "json") return ReportFormat::Json;
    if (name == "csv") return ReportFormat::Csv;
    if (name == "md") return ReportFormat::Md;
    throw UnknownFormat(name);
}

namespace detail {

inline std::uint64_t outcome_count(const TierStats& row, Outcome outcome) {
    const auto it = row.outcome_counts.find(outcome);
    return it == row.outcome_counts.end() ? 0 : it->second;
}

inline std::size_t prevalence_denominator(const ReportBundle& bundle, const TierStats& row) {
    return bundle.tier_config.sample_per_tier == 0 ? row.lib_count
                                                   : bundle.tier_config.sample_per_tier;
}

inline std::string type_counts_inline(const std::map<ChangeType, std::uint64_t>& counts) {
    std::string out;
    for (const auto& [type, count] : types_by_count(counts)) {
        if (!out.empty()) out += ", ";
        out += std::string(display_name(type)) + " " + std::to_string(count);
    }
    return out;
}

}  // namespace detail

inline std::string emit_json(const ReportBundle& bundle) {
    using json = nlohmann::ordered_json;
    json doc;
    doc["report_schema_version"] = 1;
    doc["metadata"] = {{"tool_version", bundle.metadata.tool_version},
                       {"rule_catalog_version", bundle.metadata.rule_catalog_version},
                       {"taxonomy_hash", bundle.metadata.taxonomy_hash},
                       {"corpus_snapshot_at", bundle.metadata.corpus_snapshot_at}};
    doc["tier_config"] = {{"top_n", bundle.tier_config.top_n},
                          {"middle_low", bundle.tier_config.middle_low},
                          {"middle_high", bundle.tier_config.middle_high},
                          {"bottom_dependents", bundle.tier_config.bottom_dependents},
                          {"sample_per_tier", bundle.tier_config.sample_per_tier}};
    doc["totals"] = {{"libraries", bundle.library_count},
                     {"pulls", bundle.pr_count},
                     {"update_related", bundle.update_related_total},
                     {"unsafe", bundle.unsafe_total}};

    auto table1 = json::array();
    auto table2 = json::array();
    auto table3 = json::array();
    auto table4 = json::array();
    for (const auto& row : bundle.tiers) {
        table1.push_back({{"tier", to_string(row.tier)},
                          {"libraries", row.lib_count},
                          {"update_related_prs", row.update_related_pr_count},
                          {"mean", row.update_related_stats.mean_display},
                          {"median", row.update_related_stats.median_display},
                          {"sd", row.update_related_stats.sd_display}});
        table2.push_back(
            {{"tier", to_string(row.tier)},
             {"unsafe_libraries", row.unsafe_lib_count},
             {"unsafe_library_percent",
              pct_half_up(row.unsafe_lib_count, detail::prevalence_denominator(bundle, row))},
             {"unsafe_prs", row.unsafe_pr_count},
             {"mean", row.unsafe_stats.mean_display},
             {"median", row.unsafe_stats.median_display},
             {"sd", row.unsafe_stats.sd_display}});
        json outcomes = json::object();
        for (const auto outcome : {Outcome::Merged, Outcome::Closed, Outcome::Opened}) {
            outcomes[std::string(to_string(outcome))] = {
                {"count", detail::outcome_count(row, outcome)},
                {"percent", outcome_percent(row, outcome)}};
        }
        table3.push_back({{"tier", to_string(row.tier)},
                          {"unsafe_prs", row.unsafe_pr_count},
                          {"outcomes", std::move(outcomes)}});
        const auto split_json = [](const std::map<ChangeType, std::uint64_t>& counts,
                                   std::uint64_t total) {
            json split;
            split["total"] = total;
            auto types = json::array();
            for (const auto& [type, count] : types_by_count(counts))
                types.push_back({{"type", std::string(display_name(type))}, {"count", count}});
            split["types"] = std::move(types);
            return split;
        };
        table4.push_back(
            {{"tier", to_string(row.tier)},
             {"merged_closed_total", row.attention_split.merged_closed_total},
             {"with_attention", split_json(row.attention_split.with_counts,
                                           row.attention_split.with_total)},
             {"without_attention", split_json(row.attention_split.without_counts,
                                              row.attention_split.without_total)}});
    }
    doc["table1_update_related"] = std::move(table1);
    doc["table2_prevalence"] = std::move(table2);
    doc["table3_outcomes"] = std::move(table3);
    doc["table4_attention"] = std::move(table4);

    auto fig = json::array();
    for (const auto& [feature, count] : feature_totals_ordered(bundle))
        fig.push_back({{"feature", std::string(to_string(feature))}, {"count", count}});
    doc["fig1_feature_frequency"] = std::move(fig);

    return doc.dump(2) + "\n";
}

inline std::string emit_csv(const ReportBundle& bundle) {
    std::ostringstream out;
    out << "# metadata\nkey,value\n";
    out << "tool_version," << bundle.metadata.tool_version << "\n";
    out << "rule_catalog_version," << bundle.metadata.rule_catalog_version << "\n";
    out << "taxonomy_hash," << bundle.metadata.taxonomy_hash << "\n";
    out << "corpus_snapshot_at," << bundle.metadata.corpus_snapshot_at << "\n";
    out << "libraries," << bundle.library_count << "\n";
    out << "pulls," << bundle.pr_count << "\n";
    out << "update_related," << bundle.update_related_total << "\n";
    out << "unsafe," << bundle.unsafe_total << "\n";

    out << "\n# table1_update_related\ntier,libraries,update_related_prs,mean,median,sd\n";
    for (const auto& row : bundle.tiers) {
        out << to_string(row.tier) << "," << row.lib_count << "," << row.update_related_pr_count
            << "," << row.update_related_stats.mean_display << ","
            << row.update_related_stats.median_display << ","
            << row.update_related_stats.sd_display << "\n";
    }

    out << "\n# table2_prevalence\n"
           "tier,unsafe_libraries,unsafe_library_percent,unsafe_prs,mean,median,sd\n";
    for (const auto& row : bundle.tiers) {
        out << to_string(row.tier) << "," << row.unsafe_lib_count << ","
            << pct_half_up(row.unsafe_lib_count, detail::prevalence_denominator(bundle, row))
            << "," << row.unsafe_pr_count << "," << row.unsafe_stats.mean_display << ","
            << row.unsafe_stats.median_display << "," << row.unsafe_stats.sd_display << "\n";
    }

    out << "\n# table3_outcomes\n"
           "tier,unsafe_prs,merged,merged_percent,closed,closed_percent,opened,opened_percent\n";
    for (const auto& row : bundle.tiers) {
        out << to_string(row.tier) << "," << row.unsafe_pr_count;
        for (const auto outcome : {Outcome::Merged, Outcome::Closed, Outcome::Opened})
            out << "," << detail::outcome_count(row, outcome) << ","
                << outcome_percent(row, outcome);
        out << "\n";
    }

    out << "\n# table4_attention\ntier,attention,prs,merged_closed_total,change_types\n";
    for (const auto& row : bundle.tiers) {
        out << to_string(row.tier) << ",with," << row.attention_split.with_total << ","
            << row.attention_split.merged_closed_total << ",\""
            << detail::type_counts_inline(row.attention_split.with_counts) << "\"\n";
        out << to_string(row.tier) << ",without," << row.attention_split.without_total << ","
            << row.attention_split.merged_closed_total << ",\""
            << detail::type_counts_inline(row.attention_split.without_counts) << "\"\n";
    }

    out << "\n# fig1_feature_frequency\nfeature,count\n";
    for (const auto& [feature, count] : feature_totals_ordered(bundle))
        out << to_string(feature) << "," << count << "\n";
    return out.str();
}

inline std::string emit_md(const ReportBundle& bundle) {
    std::ostringstream out;
    out << "# Dependency update scan report\n\n";
    out << "- tool version: " << bundle.metadata.tool_version << "\n";
    out << "- rule catalog: " << bundle.metadata.rule_catalog_version << "\n";
    out << "- taxonomy hash: " << bundle.metadata.taxonomy_hash << "\n";
    out << "- corpus snapshot: "
        << (bundle.metadata.corpus_snapshot_at.empty() ? "(none)"
                                                       : bundle.metadata.corpus_snapshot_at)
        << "\n";
    out << "- libraries: " << bundle.library_count << ", pulls: " << bundle.pr_count
        << ", update-related: " << bundle.update_related_total
        << ", unsafe: " << bundle.unsafe_total << "\n";

    out << "\n## Update-related PRs per tier\n\n";
    out << "| Tier | Libraries | Update-related PRs | Mean | Median | SD |\n";
    out << "| --- | ---: | ---: | ---: | ---: | ---: |\n";
    for (const auto& row : bundle.tiers) {
        out << "| " << to_string(row.tier) << " | " << row.lib_count << " | "
            << row.update_related_pr_count << " | " << row.update_related_stats.mean_display
            << " | " << row.update_related_stats.median_display << " | "
            << row.update_related_stats.sd_display << " |\n";
    }

    out << "\n## Unsafe update prevalence per tier\n\n";
    out << "| Tier | Flagged libraries | % | Unsafe PRs | Mean | Median | SD |\n";
    out << "| --- | ---: | ---: | ---: | ---: | ---: | ---: |\n";
    for (const auto& row : bundle.tiers) {
        out << "| " << to_string(row.tier) << " | " << row.unsafe_lib_count << " | "
            << pct_half_up(row.unsafe_lib_count, detail::prevalence_denominator(bundle, row))
            << "% | " << row.unsafe_pr_count << " | " << row.unsafe_stats.mean_display << " | "
            << row.unsafe_stats.median_display << " | " << row.unsafe_stats.sd_display << " |\n";
    }

    out << "\n## Unsafe update outcomes per tier\n\n";
    out << "| Tier | Merged | % | Closed | % | Opened | % |\n";
    out << "| --- | ---: | ---: | ---: | ---: | ---: | ---: |\n";
    for (const auto& row : bundle.tiers) {
        out << "| " << to_string(row.tier);
        for (const auto outcome : {Outcome::Merged, Outcome::Closed, Outcome::Opened})
            out << " | " << detail::outcome_count(row, outcome) << " | "
                << outcome_percent(row, outcome) << "%";
        out << " |\n";
    }

    out << "\n## Attention split over merged and closed unsafe PRs\n\n";
    out << "| Tier | Attention | PRs | Merged+closed | Change types (desc) |\n";
    out << "| --- | --- | ---: | ---: | --- |\n";
    for (const auto& row : bundle.tiers) {
        out << "| " << to_string(row.tier) << " | with | " << row.attention_split.with_total
            << " | " << row.attention_split.merged_closed_total << " | "
            << detail::type_counts_inline(row.attention_split.with_counts) << " |\n";
        out << "| " << to_string(row.tier) << " | without | "
            << row.attention_split.without_total << " | "
            << row.attention_split.merged_closed_total << " | "
            << detail::type_counts_inline(row.attention_split.without_counts) << " |\n";
    }

    out << "\n## Feature frequency\n\n";
    out << "| Feature | PRs |\n";
    out << "| --- | ---: |\n";
    for (const auto& [feature, count] : feature_totals_ordered(bundle))
        out << "| " << to_string(feature) << " | " << count << " |\n";
    return out.str();
}

inline std::string emit_report(const ReportBundle& bundle, ReportFormat format) {
    switch (format) {
        case ReportFormat::Json:
            return emit_json(bundle);
        case ReportFormat::Csv:
            return emit_csv(bundle);
        case ReportFormat::Md:
            return emit_md(bundle);
    }
    throw UnknownFormat("(invalid enum value)");
}

/// Simple static bar chart of the feature frequencies.
inline std::string render_feature_frequency_svg(const ReportBundle& bundle) {
    const auto ordered = feature_totals_ordered(bundle);
    std::uint64_t max_count = 1;
    for (const auto& [feature, count] : ordered) max_count = std::max(max_count, count);

    constexpr int width = 640;
    constexpr int height = 360;
    constexpr int left = 110;
    constexpr int right_pad = 70;
    constexpr int top = 40;
    constexpr int bar_h = 32;
    constexpr int gap = 16;

    std::ostringstream out;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
        << height << "\" viewBox=\"0 0 " << width << " " << height << "\">\n";
    out << "  <rect width=\"" << width << "\" height=\"" << height << "\" fill=\"white\"/>\n";
    out << "  <text x=\"" << left << "\" y=\"24\" font-family=\"sans-serif\" font-size=\"16\">"
        << "PRs exhibiting each unsafe update feature</text>\n";
    int y = top;
    for (const auto& [feature, count] : ordered) {
        const auto bar_w = static_cast<int>(
            static_cast<double>(count) / static_cast<double>(max_count) *
            (width - left - right_pad));
        out << "  <text x=\"" << (left - 8) << "\" y=\"" << (y + bar_h / 2 + 5)
            << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"13\">"
            << to_string(feature) << "</text>\n";
        out << "  <rect x=\"" << left << "\" y=\"" << y << "\" width=\"" << bar_w
            << "\" height=\"" << bar_h << "\" fill=\"#4878a8\"/>\n";
        out << "  <text x=\"" << (left + bar_w + 6) << "\" y=\"" << (y + bar_h / 2 + 5)
            << "\" font-family=\"sans-serif\" font-size=\"13\">" << count << "</text>\n";
        y += bar_h + gap;
    }
    out << "</svg>\n";
    return out.str();
}

}  // namespace tailguard
