#pragma once

#include "citewin/baseline.hpp"
#include "citewin/corpus.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace citewin {

// Full counting credits every listed author with the whole publication
// score; equal-split divides it by the number of authors.
enum class CountingRule { full, equal_split };

CountingRule parse_counting_rule(const std::string& text); // throws Error(config)
std::string to_string(CountingRule rule);

struct ScientificStrength {
    std::string researcher_id;
    int observation_year = 0;
    double value = 0.0;
    int n_pubs = 0; // window publications authored, cited or not
};

struct ScoreTable {
    int observation_year = 0;
    std::vector<ScientificStrength> rows; // one per researcher, sorted by id

    const ScientificStrength* find(std::string_view researcher_id) const;
};

// Sums standardized publication scores per researcher, accumulating in
// ascending pub_id order so results do not depend on input ordering.
ScoreTable compute_ss(const Corpus& corpus, const BaselineTable& baselines,
                      int observation_year, CountingRule counting = CountingRule::full);

} // namespace citewin
