#pragma once

#include "citewin/ranking.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace citewin {

// delta = benchmark percentile - early percentile; positive means the
// researcher stands higher at the benchmark than in the early evaluation.
struct ShiftRecord {
    std::string researcher_id;
    std::string sds_code;
    int early_year = 0;
    int delta = 0; // in [-100, 100]
};

// Δ+/Δ− statistics keep their sign and are absent when the subset is empty;
// the General rows are computed on |delta| over all researchers.
struct ShiftStats {
    int n = 0;
    double pct_changed_total = 0.0;
    double pct_changed_pos = 0.0;
    double pct_changed_neg = 0.0;
    double mean_abs = 0.0;
    std::optional<double> mean_pos;
    std::optional<double> mean_neg;
    double median_abs = 0.0;
    std::optional<double> median_pos;
    std::optional<double> median_neg;
    int max_abs_signed = 0; // the delta of largest magnitude, sign kept
    std::optional<int> max_pos;
    std::optional<int> max_neg;
    double stddev_abs = 0.0; // sample standard deviation of |delta|
    double spearman = 1.0;
};

std::vector<ShiftRecord> compute_shifts(const SdsRanking& early, const SdsRanking& benchmark);

ShiftStats shift_stats(const std::vector<ShiftRecord>& shifts, const SdsRanking& early,
                       const SdsRanking& benchmark);

// Tie-corrected rank correlation of two paired integer percentile vectors
// (Pearson on average ranks). Exact +/-1 whenever the ranks are exactly
// linearly related, in particular for self-comparison and reversal.
double spearman_percentiles(const std::vector<int>& a, const std::vector<int>& b);

struct QuartileObs {
    std::string researcher_id;
    std::string group; // UDA code under the default grouping
    int class_early = 0;
    int class_benchmark = 0;
};

struct TransitionCounts {
    std::string group;
    int early_year = 0;
    int population = 0;
    int n_changed_any = 0; // |class change| >= 1
    int n_outliers = 0;    // |class change| in {2,3}
    double share_changed_any = 0.0;
    double share_outliers = 0.0;
};

std::vector<TransitionCounts> quartile_transitions(const std::vector<QuartileObs>& obs,
                                                   int early_year);

// Delta histogram over symmetric integer buckets built from positive edges,
// e.g. {20,40} -> [-100,-41] [-40,-21] [-20,-1] [0,0] [1,20] [21,40] [41,100].
struct HistogramBin {
    int low = 0;  // inclusive
    int high = 0; // inclusive
    std::int64_t count = 0;
};

std::vector<HistogramBin> shift_histogram(const std::vector<ShiftRecord>& shifts,
                                          const std::vector<int>& positive_edges = {20, 40});

struct SdsYearPoint {
    std::string sds_code;
    int early_year = 0;
    double spearman = 0.0;
    double mean_abs = 0.0;
};

struct CumulativePoint {
    std::string metric; // "spearman" (share strictly above) or
                        // "mean_abs_shift" (share at or below)
    int early_year = 0;
    double threshold = 0.0;
    double share_of_sds = 0.0;
};

struct ConvergenceSeries {
    std::vector<SdsYearPoint> per_sds;
    std::vector<CumulativePoint> cumulative;
};

// rankings_by_year: observation year -> one ranking per SDS. Every year is
// compared against the benchmark year's rankings.
ConvergenceSeries convergence_series(const std::map<int, std::vector<SdsRanking>>& rankings_by_year,
                                     int benchmark_year);

} // namespace citewin
