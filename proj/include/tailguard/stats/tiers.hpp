#pragma once

// Library dependence tiers. Sampling follows three strata: the most
// depended-upon libraries by rank, a middle band by dependent count, and
// single-dependent libraries at the bottom.

#include <algorithm>
#include <stdexcept>
#include <string>
#include <vector>

#include "tailguard/core/model.hpp"

namespace tailguard {

struct TierConfig {
    std::size_t top_n = 500;
    std::uint64_t middle_low = 500;
    std::uint64_t middle_high = 1000;  // inclusive
    std::uint64_t bottom_dependents = 1;
    std::size_t sample_per_tier = 500;  // percentage denominator; 0 means "use actual lib count"
};

class MissingRank : public std::runtime_error {
public:
    explicit MissingRank(const std::string& lib)
        : std::runtime_error("library has no dependents rank: " + lib) {}
};

/// Assigns the tier for one library. Precedence is Top over Middle over
/// Bottom; anything outside the three bands is Unsampled. The rank is
/// required because Top membership is rank-based; call rank_libraries first
/// when the corpus came without ranks.
inline Tier assign_tier(const LibraryRecord& lib, const TierConfig& cfg = {}) {
    if (!lib.dependents_rank.has_value()) throw MissingRank(lib.name);
    if (*lib.dependents_rank >= 1 && static_cast<std::size_t>(*lib.dependents_rank) <= cfg.top_n)
        return Tier::Top;
    if (lib.dependents >= cfg.middle_low && lib.dependents <= cfg.middle_high)
        return Tier::Middle;
    if (lib.dependents == cfg.bottom_dependents) return Tier::Bottom;
    return Tier::Unsampled;
}

/// Fills dependents_rank for every library: 1-based, descending dependents,
/// ties broken by ascending name so the ranking is total and deterministic.
inline void rank_libraries(std::vector<LibraryRecord>& libs) {
    std::vector<std::size_t> order(libs.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&libs](std::size_t a, std::size_t b) {
        if (libs[a].dependents != libs[b].dependents) return libs[a].dependents > libs[b].dependents;
        return libs[a].name < libs[b].name;
    });
    for (std::size_t pos = 0; pos < order.size(); ++pos)
        libs[order[pos]].dependents_rank = static_cast<std::uint32_t>(pos + 1);
}

inline void rank_libraries(Corpus& corpus) { rank_libraries(corpus.libraries); }

}  // namespace tailguard
