#pragma once

#include "citewin/corpus.hpp"

#include <cstdint>
#include <map>
#include <string>

namespace citewin {

struct BaselineCell {
    double median = 0.0; // >= 1, computed over cited publications only
    int n_cited = 0;
};

// Median citation baselines for one observation year, keyed by
// (pub_year, subject category). Cells with no cited publication are absent.
struct BaselineTable {
    int observation_year = 0;
    std::map<std::pair<int, std::string>, BaselineCell> cells;

    const BaselineCell* find(int pub_year, const std::string& category) const {
        auto it = cells.find({pub_year, category});
        return it == cells.end() ? nullptr : &it->second;
    }
};

// Zero-citation publications are excluded from every cell; a publication
// with several categories contributes its full count to each of them.
// Even-sized cells use the midpoint of the two central order statistics.
BaselineTable compute_medians(const Corpus& corpus, int observation_year);

// Weighted average of the per-category standardized values
// sum_k w_k * c / Me_k; exactly 0 when the publication is uncited.
// Throws Error(internal) if a cited publication hits a missing cell,
// which means the table was built from a different corpus.
double standardize_publication(const Publication& pub, std::int64_t citations_at_year,
                               const BaselineTable& baselines);

void write_baseline_csv(const BaselineTable& table, class CsvWriter& writer);

} // namespace citewin
