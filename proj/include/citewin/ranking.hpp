#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace citewin {

struct RankedEntry {
    std::string researcher_id;
    double ss = 0.0;
    int percentile = 0; // 0..100, 100 = most productive
    int quartile = 0;   // 4 = first (top) quartile .. 1 = fourth
    bool top = false;   // strictly above the top-percentile threshold
};

struct SdsRanking {
    std::string sds_code;
    int observation_year = 0;
    std::vector<RankedEntry> entries; // sorted by researcher_id

    const RankedEntry* find(std::string_view researcher_id) const;
};

// Percentile = round(100*(N-r)/(N-1)) where r is the descending rank with
// ties replaced by the mean of the tied positions; rounding is half away
// from zero and the arithmetic is exact (integer). A single researcher
// gets percentile 100. Quartile and top fields are left at their defaults.
SdsRanking percentile_rank(std::string sds_code, int observation_year,
                           std::vector<std::pair<std::string, double>> scores);

// >=75 -> 4, >=50 -> 3, >=25 -> 2, else 1. Throws std::out_of_range
// outside [0,100].
int quartile_class(int percentile);

// Strictly above the threshold counts as top.
std::vector<std::pair<std::string, bool>> top_scientist_flags(const SdsRanking& ranking,
                                                              int threshold_percentile = 80);

// percentile_rank + quartile_class + top flags in one pass.
SdsRanking rank_sds(std::string sds_code, int observation_year,
                    std::vector<std::pair<std::string, double>> scores,
                    int top_threshold_percentile = 80);

} // namespace citewin
