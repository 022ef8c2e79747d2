#pragma once

#include "citewin/ranking.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace citewin {

// Grouped 2x2 contingency table for a binary-predictor probit model.
// Cell counts are indexed as nXY: X is the predictor (early-year top flag),
// Y the outcome (benchmark-year top flag).
struct ContingencyTable {
    long long n00 = 0;
    long long n01 = 0;
    long long n10 = 0;
    long long n11 = 0;

    long long n() const { return n00 + n01 + n10 + n11; }
    bool operator==(const ContingencyTable&) const = default;
};

struct ProbitFit {
    double beta0 = 0.0;
    double beta1 = 0.0;
    double se_beta0 = 0.0;
    double se_beta1 = 0.0;
    double log_lik = 0.0;
    double null_log_lik = 0.0;
    double mcfadden_r2 = 0.0;
    double lr_stat = 0.0;
    double lr_p_value = 1.0;
    int n_iterations = 0;
};

// Maximum-likelihood probit fit P(Y=1|X) = Phi(beta0 + beta1*X) by damped
// Newton-Raphson from (0,0). Throws Error(separation) when a contingency
// cell is empty (the MLE does not exist) and Error(degenerate) when a
// predictor level is entirely absent.
ProbitFit fit_probit(const ContingencyTable& table);

// One per-UDA row of the top-scientist persistence analysis. When the fit
// fails (separation/degenerate data) `fit` is empty and `error` explains
// why; other UDAs are unaffected.
struct PersistenceRow {
    std::string uda;
    int early_year = 0;
    int benchmark_year = 0;
    ContingencyTable table;
    std::optional<ProbitFit> fit;
    std::string error;

    // Share of early-top researchers still top at benchmark (n11 / row1).
    double observed_persistence() const;
    // Share of early-non-top researchers that are top at benchmark.
    double observed_emergence() const;
};

// Pools researchers of each UDA across its SDSs and fits one probit per
// UDA: X = top flag in `early`, Y = top flag in `benchmark`. Rankings are
// matched per SDS by researcher id; `sds_to_uda` maps SDS code -> UDA code.
// Rows come back sorted by UDA code.
std::vector<PersistenceRow> persistence_report(
    const std::vector<SdsRanking>& early, const std::vector<SdsRanking>& benchmark,
    const std::map<std::string, std::string>& sds_to_uda);

} // namespace citewin
