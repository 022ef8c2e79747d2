#include "citewin/ranking.hpp"

#include "citewin/errors.hpp"

#include <algorithm>
#include <stdexcept>

namespace citewin {

const RankedEntry* SdsRanking::find(std::string_view researcher_id) const {
    auto it = std::lower_bound(entries.begin(), entries.end(), researcher_id,
                               [](const RankedEntry& e, std::string_view v) {
                                   return e.researcher_id < v;
                               });
    if (it != entries.end() && it->researcher_id == researcher_id) return &*it;
    return nullptr;
}

SdsRanking percentile_rank(std::string sds_code, int observation_year,
                           std::vector<std::pair<std::string, double>> scores) {
    if (scores.empty()) {
        throw Error(ErrorKind::internal, "percentile_rank: empty SDS");
    }
    SdsRanking ranking;
    ranking.sds_code = std::move(sds_code);
    ranking.observation_year = observation_year;

    const std::size_t n = scores.size();
    std::sort(scores.begin(), scores.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        return a.first < b.first;
    });

    ranking.entries.reserve(n);
    std::size_t block = 0;
    while (block < n) {
        std::size_t end = block;
        while (end + 1 < n && scores[end + 1].second == scores[block].second) ++end;
        // 1-based tied positions block+1 .. end+1; mean rank r = (a+b)/2.
        // percentile = round(100*(n-r)/(n-1)), exact:
        //   numerator = 100*n - 50*(a+b), denominator = n-1,
        //   half-away-from-zero = (2*num + den) / (2*den).
        int percentile = 100;
        if (n > 1) {
            const long long a = static_cast<long long>(block) + 1;
            const long long b = static_cast<long long>(end) + 1;
            const long long num = 100 * static_cast<long long>(n) - 50 * (a + b);
            const long long den = static_cast<long long>(n) - 1;
            percentile = static_cast<int>((2 * num + den) / (2 * den));
        }
        for (std::size_t i = block; i <= end; ++i) {
            ranking.entries.push_back({std::move(scores[i].first), scores[i].second, percentile,
                                       0, false});
        }
        block = end + 1;
    }

    std::sort(ranking.entries.begin(), ranking.entries.end(),
              [](const RankedEntry& a, const RankedEntry& b) {
                  return a.researcher_id < b.researcher_id;
              });
    return ranking;
}

int quartile_class(int percentile) {
    if (percentile < 0 || percentile > 100) {
        throw std::out_of_range("quartile_class: percentile outside [0,100]");
    }
    if (percentile >= 75) return 4;
    if (percentile >= 50) return 3;
    if (percentile >= 25) return 2;
    return 1;
}

std::vector<std::pair<std::string, bool>> top_scientist_flags(const SdsRanking& ranking,
                                                              int threshold_percentile) {
    std::vector<std::pair<std::string, bool>> flags;
    flags.reserve(ranking.entries.size());
    for (const auto& e : ranking.entries) {
        flags.emplace_back(e.researcher_id, e.percentile > threshold_percentile);
    }
    return flags;
}

SdsRanking rank_sds(std::string sds_code, int observation_year,
                    std::vector<std::pair<std::string, double>> scores,
                    int top_threshold_percentile) {
    SdsRanking ranking =
        percentile_rank(std::move(sds_code), observation_year, std::move(scores));
    for (auto& e : ranking.entries) {
        e.quartile = quartile_class(e.percentile);
        e.top = e.percentile > top_threshold_percentile;
    }
    return ranking;
}

} // namespace citewin
