#include "citewin/score.hpp"

#include "citewin/errors.hpp"

#include <fmt/core.h>

#include <algorithm>
#include <unordered_map>

namespace citewin {

CountingRule parse_counting_rule(const std::string& text) {
    if (text == "full") return CountingRule::full;
    if (text == "equal-split") return CountingRule::equal_split;
    throw Error(ErrorKind::config,
                fmt::format("counting: expected 'full' or 'equal-split', got '{}'", text));
}

std::string to_string(CountingRule rule) {
    return rule == CountingRule::full ? "full" : "equal-split";
}

const ScientificStrength* ScoreTable::find(std::string_view researcher_id) const {
    auto it = std::lower_bound(rows.begin(), rows.end(), researcher_id,
                               [](const ScientificStrength& s, std::string_view v) {
                                   return s.researcher_id < v;
                               });
    if (it != rows.end() && it->researcher_id == researcher_id) return &*it;
    return nullptr;
}

ScoreTable compute_ss(const Corpus& corpus, const BaselineTable& baselines,
                      int observation_year, CountingRule counting) {
    if (baselines.observation_year != observation_year) {
        throw Error(ErrorKind::internal,
                    fmt::format("baseline table is for year {}, not {}",
                                baselines.observation_year, observation_year));
    }
    const std::size_t t = corpus.year_index(observation_year);

    ScoreTable table;
    table.observation_year = observation_year;
    table.rows.reserve(corpus.researchers.size());
    std::unordered_map<std::string_view, std::size_t> row_of;
    row_of.reserve(corpus.researchers.size());
    for (const auto& r : corpus.researchers) {
        row_of.emplace(r.researcher_id, table.rows.size());
        table.rows.push_back({r.researcher_id, observation_year, 0.0, 0});
    }

    // Publications are stored sorted by pub_id, so walking them in order
    // accumulates each researcher's sum in ascending pub_id order.
    for (std::size_t i = 0; i < corpus.publications.size(); ++i) {
        const Publication& pub = corpus.publications[i];
        const double score = standardize_publication(pub, corpus.citations_at(i, t), baselines);
        const double credit = counting == CountingRule::full
                                  ? score
                                  : score / static_cast<double>(pub.author_ids.size());
        for (const auto& author : pub.author_ids) {
            auto& row = table.rows[row_of.at(author)];
            row.value += credit;
            ++row.n_pubs;
        }
    }
    return table;
}

} // namespace citewin
