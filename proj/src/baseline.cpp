#include "citewin/baseline.hpp"

#include "citewin/csv.hpp"
#include "citewin/errors.hpp"

#include <fmt/core.h>

#include <algorithm>

namespace citewin {

namespace {

double median_sorted(std::vector<std::int64_t>& values) {
    std::sort(values.begin(), values.end());
    const std::size_t n = values.size();
    if (n % 2 == 1) return static_cast<double>(values[n / 2]);
    return 0.5 * (static_cast<double>(values[n / 2 - 1]) + static_cast<double>(values[n / 2]));
}

} // namespace

BaselineTable compute_medians(const Corpus& corpus, int observation_year) {
    const std::size_t t = corpus.year_index(observation_year);
    std::map<std::pair<int, std::string>, std::vector<std::int64_t>> cells;
    for (std::size_t i = 0; i < corpus.publications.size(); ++i) {
        const std::int64_t c = corpus.citations_at(i, t);
        if (c == 0) continue;
        const Publication& pub = corpus.publications[i];
        for (const auto& cw : pub.categories) {
            cells[{pub.pub_year, cw.category}].push_back(c);
        }
    }
    BaselineTable table;
    table.observation_year = observation_year;
    for (auto& [key, values] : cells) {
        BaselineCell cell;
        cell.n_cited = static_cast<int>(values.size());
        cell.median = median_sorted(values);
        table.cells.emplace(key, cell);
    }
    return table;
}

double standardize_publication(const Publication& pub, std::int64_t citations_at_year,
                               const BaselineTable& baselines) {
    if (citations_at_year == 0) return 0.0;
    double score = 0.0;
    for (const auto& cw : pub.categories) {
        const BaselineCell* cell = baselines.find(pub.pub_year, cw.category);
        if (cell == nullptr) {
            throw Error(ErrorKind::internal,
                        fmt::format("no baseline cell for (pub_year {}, category '{}', "
                                    "observation year {}); pub '{}' has {} citations",
                                    pub.pub_year, cw.category, baselines.observation_year,
                                    pub.pub_id, citations_at_year));
        }
        score += cw.weight * (static_cast<double>(citations_at_year) / cell->median);
    }
    return score;
}

void write_baseline_csv(const BaselineTable& table, CsvWriter& writer) {
    for (const auto& [key, cell] : table.cells) {
        writer.write_row({std::to_string(key.first), key.second,
                          std::to_string(table.observation_year), std::to_string(cell.n_cited),
                          fixed6(cell.median)});
    }
}

} // namespace citewin
