#include "citewin/stability.hpp"

#include "citewin/errors.hpp"

#include <fmt/core.h>

#include <algorithm>
#include <cmath>
#include <numeric>

namespace citewin {

namespace {

double median_of(std::vector<double> values) {
    std::sort(values.begin(), values.end());
    const std::size_t n = values.size();
    if (n % 2 == 1) return values[n / 2];
    return 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

// Average ranks doubled so they stay integers: entry i gets a+b where a and
// b are the 1-based first and last positions of its tie block.
std::vector<long long> doubled_average_ranks(const std::vector<int>& values) {
    const std::size_t n = values.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    std::vector<long long> ranks(n);
    std::size_t block = 0;
    while (block < n) {
        std::size_t end = block;
        while (end + 1 < n && values[order[end + 1]] == values[order[block]]) ++end;
        const long long doubled = static_cast<long long>(block + 1 + end + 1);
        for (std::size_t i = block; i <= end; ++i) ranks[order[i]] = doubled;
        block = end + 1;
    }
    return ranks;
}

} // namespace

double spearman_percentiles(const std::vector<int>& a, const std::vector<int>& b) {
    if (a.size() != b.size() || a.empty()) {
        throw Error(ErrorKind::internal, "spearman: vectors must be non-empty and equal length");
    }
    const std::size_t n = a.size();
    const auto ra = doubled_average_ranks(a);
    const auto rb = doubled_average_ranks(b);

    using i128 = __int128;
    i128 sx = 0, sy = 0, sxx = 0, syy = 0, sxy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const i128 x = ra[i];
        const i128 y = rb[i];
        sx += x;
        sy += y;
        sxx += x * x;
        syy += y * y;
        sxy += x * y;
    }
    const i128 nn = static_cast<i128>(n);
    const i128 nxx = nn * sxx - sx * sx;
    const i128 nyy = nn * syy - sy * sy;
    const i128 nxy = nn * sxy - sx * sy;

    if (nxx == 0 && nyy == 0) return 1.0; // both rankings fully tied
    if (nxx == 0 || nyy == 0) return 0.0;
    // Exact +/-1 when the ranks are exactly linearly related (safe from
    // overflow for n up to ~20000: |nxy| <= 4n^4).
    if (n <= 20000 && nxy * nxy == nxx * nyy) return nxy > 0 ? 1.0 : -1.0;

    const double r = static_cast<double>(nxy) /
                     (std::sqrt(static_cast<double>(nxx)) * std::sqrt(static_cast<double>(nyy)));
    return std::clamp(r, -1.0, 1.0);
}

std::vector<ShiftRecord> compute_shifts(const SdsRanking& early, const SdsRanking& benchmark) {
    if (early.sds_code != benchmark.sds_code) {
        throw Error(ErrorKind::internal,
                    fmt::format("compute_shifts: SDS mismatch '{}' vs '{}'", early.sds_code,
                                benchmark.sds_code));
    }
    if (early.entries.size() != benchmark.entries.size()) {
        throw Error(ErrorKind::internal,
                    fmt::format("compute_shifts: researcher sets differ in SDS '{}' ({} vs {})",
                                early.sds_code, early.entries.size(),
                                benchmark.entries.size()));
    }
    std::vector<ShiftRecord> shifts;
    shifts.reserve(early.entries.size());
    for (std::size_t i = 0; i < early.entries.size(); ++i) {
        const auto& e = early.entries[i];
        const auto& s = benchmark.entries[i];
        if (e.researcher_id != s.researcher_id) {
            throw Error(ErrorKind::internal,
                        fmt::format("compute_shifts: researcher sets differ in SDS '{}' "
                                    "('{}' vs '{}')",
                                    early.sds_code, e.researcher_id, s.researcher_id));
        }
        shifts.push_back({e.researcher_id, early.sds_code, early.observation_year,
                          s.percentile - e.percentile});
    }
    return shifts;
}

ShiftStats shift_stats(const std::vector<ShiftRecord>& shifts, const SdsRanking& early,
                       const SdsRanking& benchmark) {
    if (shifts.empty()) {
        throw Error(ErrorKind::internal, "shift_stats: empty shift list");
    }
    ShiftStats stats;
    stats.n = static_cast<int>(shifts.size());

    std::vector<double> abs_values;
    std::vector<double> pos_values;
    std::vector<double> neg_values;
    abs_values.reserve(shifts.size());
    int n_pos = 0, n_neg = 0;
    for (const auto& s : shifts) {
        abs_values.push_back(std::abs(static_cast<double>(s.delta)));
        if (s.delta > 0) {
            ++n_pos;
            pos_values.push_back(s.delta);
            if (!stats.max_pos || s.delta > *stats.max_pos) stats.max_pos = s.delta;
        } else if (s.delta < 0) {
            ++n_neg;
            neg_values.push_back(s.delta);
            if (!stats.max_neg || s.delta < *stats.max_neg) stats.max_neg = s.delta;
        }
        // On a magnitude tie the negative shift is reported, matching the
        // paper-style convention that extreme shifts are penalties.
        if (std::abs(s.delta) > std::abs(stats.max_abs_signed) ||
            (std::abs(s.delta) == std::abs(stats.max_abs_signed) && s.delta < 0)) {
            stats.max_abs_signed = s.delta;
        }
    }

    const double n = static_cast<double>(stats.n);
    stats.pct_changed_pos = n_pos / n;
    stats.pct_changed_neg = n_neg / n;
    stats.pct_changed_total = (n_pos + n_neg) / n;

    stats.mean_abs = std::accumulate(abs_values.begin(), abs_values.end(), 0.0) / n;
    stats.median_abs = median_of(abs_values);
    if (stats.n > 1) {
        double ssq = 0.0;
        for (double v : abs_values) ssq += (v - stats.mean_abs) * (v - stats.mean_abs);
        stats.stddev_abs = std::sqrt(ssq / (n - 1.0));
    }
    if (!pos_values.empty()) {
        stats.mean_pos =
            std::accumulate(pos_values.begin(), pos_values.end(), 0.0) / pos_values.size();
        stats.median_pos = median_of(pos_values);
    }
    if (!neg_values.empty()) {
        stats.mean_neg =
            std::accumulate(neg_values.begin(), neg_values.end(), 0.0) / neg_values.size();
        stats.median_neg = median_of(neg_values);
    }

    std::vector<int> early_pct, bench_pct;
    early_pct.reserve(early.entries.size());
    bench_pct.reserve(benchmark.entries.size());
    for (const auto& e : early.entries) early_pct.push_back(e.percentile);
    for (const auto& e : benchmark.entries) bench_pct.push_back(e.percentile);
    stats.spearman = spearman_percentiles(early_pct, bench_pct);
    return stats;
}

std::vector<TransitionCounts> quartile_transitions(const std::vector<QuartileObs>& obs,
                                                   int early_year) {
    std::map<std::string, TransitionCounts> by_group;
    for (const auto& o : obs) {
        auto& t = by_group[o.group];
        t.group = o.group;
        t.early_year = early_year;
        ++t.population;
        const int change = std::abs(o.class_benchmark - o.class_early);
        if (change >= 1) ++t.n_changed_any;
        if (change >= 2) ++t.n_outliers;
    }
    std::vector<TransitionCounts> out;
    out.reserve(by_group.size());
    for (auto& [_, t] : by_group) {
        t.share_changed_any = static_cast<double>(t.n_changed_any) / t.population;
        t.share_outliers = static_cast<double>(t.n_outliers) / t.population;
        out.push_back(std::move(t));
    }
    return out;
}

std::vector<HistogramBin> shift_histogram(const std::vector<ShiftRecord>& shifts,
                                          const std::vector<int>& positive_edges) {
    std::vector<int> edges = positive_edges;
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    for (int e : edges) {
        if (e <= 0 || e > 100) {
            throw Error(ErrorKind::config,
                        fmt::format("histogram edges must lie in [1,100], got {}", e));
        }
    }
    if (edges.empty() || edges.back() < 100) edges.push_back(100);

    std::vector<HistogramBin> bins;
    for (std::size_t i = edges.size(); i-- > 0;) {
        const int high = i == 0 ? 1 : edges[i - 1] + 1;
        bins.push_back({-edges[i], -high, 0});
    }
    bins.push_back({0, 0, 0});
    for (std::size_t i = 0; i < edges.size(); ++i) {
        const int low = i == 0 ? 1 : edges[i - 1] + 1;
        bins.push_back({low, edges[i], 0});
    }

    for (const auto& s : shifts) {
        for (auto& b : bins) {
            if (s.delta >= b.low && s.delta <= b.high) {
                ++b.count;
                break;
            }
        }
    }
    return bins;
}

ConvergenceSeries convergence_series(
    const std::map<int, std::vector<SdsRanking>>& rankings_by_year, int benchmark_year) {
    auto bench_it = rankings_by_year.find(benchmark_year);
    if (bench_it == rankings_by_year.end()) {
        throw Error(ErrorKind::internal,
                    fmt::format("convergence_series: no rankings for benchmark year {}",
                                benchmark_year));
    }
    std::map<std::string, const SdsRanking*> bench_by_sds;
    for (const auto& r : bench_it->second) bench_by_sds[r.sds_code] = &r;

    ConvergenceSeries series;
    for (const auto& [year, rankings] : rankings_by_year) {
        if (year == benchmark_year) continue;
        for (const auto& ranking : rankings) {
            const SdsRanking* bench = bench_by_sds.at(ranking.sds_code);
            const auto shifts = compute_shifts(ranking, *bench);
            const auto stats = shift_stats(shifts, ranking, *bench);
            series.per_sds.push_back({ranking.sds_code, year, stats.spearman, stats.mean_abs});
        }
    }

    // Cumulative frequency across SDSs: share above each Spearman threshold,
    // share at or below each mean-shift threshold.
    std::map<int, std::vector<const SdsYearPoint*>> by_year;
    for (const auto& p : series.per_sds) by_year[p.early_year].push_back(&p);
    for (const auto& [year, points] : by_year) {
        const double total = static_cast<double>(points.size());
        for (int i = 0; i <= 19; ++i) {
            const double threshold = i * 0.05;
            int count = 0;
            for (const auto* p : points) {
                if (p->spearman > threshold) ++count;
            }
            series.cumulative.push_back({"spearman", year, threshold, count / total});
        }
        for (int threshold = 0; threshold <= 30; ++threshold) {
            int count = 0;
            for (const auto* p : points) {
                if (p->mean_abs <= threshold) ++count;
            }
            series.cumulative.push_back(
                {"mean_abs_shift", year, static_cast<double>(threshold), count / total});
        }
    }
    return series;
}

} // namespace citewin
