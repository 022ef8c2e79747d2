#include "citewin/probit.hpp"

#include "citewin/errors.hpp"
#include "citewin/normal.hpp"

#include <fmt/core.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <map>

namespace citewin {

namespace {

double grouped_log_lik(const ContingencyTable& t, double eta0, double eta1) {
    return static_cast<double>(t.n01) * std::log(normal_cdf(eta0)) +
           static_cast<double>(t.n00) * std::log(normal_sf(eta0)) +
           static_cast<double>(t.n11) * std::log(normal_cdf(eta1)) +
           static_cast<double>(t.n10) * std::log(normal_sf(eta1));
}

// First and second derivatives of one group's log-likelihood with respect
// to its linear predictor eta, for `successes` out of `total` trials.
struct GroupDerivs {
    double grad;
    double hess;
};

GroupDerivs group_derivs(long long successes, long long total, double eta) {
    const double p = normal_cdf(eta);
    const double q = normal_sf(eta);
    const double phi = normal_pdf(eta);
    const double s = static_cast<double>(successes);
    const double f = static_cast<double>(total - successes);
    GroupDerivs d;
    d.grad = phi * (s / p - f / q);
    d.hess = s * (-eta * phi * p - phi * phi) / (p * p) -
             f * (-eta * phi * q + phi * phi) / (q * q);
    return d;
}

} // namespace

ProbitFit fit_probit(const ContingencyTable& t) {
    if (t.n00 < 0 || t.n01 < 0 || t.n10 < 0 || t.n11 < 0) {
        throw Error(ErrorKind::internal, "fit_probit: negative cell count");
    }
    const long long row0 = t.n00 + t.n01;
    const long long row1 = t.n10 + t.n11;
    if (row0 == 0) {
        throw Error(ErrorKind::degenerate, "fit_probit: no observations with X=0");
    }
    if (row1 == 0) {
        throw Error(ErrorKind::degenerate, "fit_probit: no observations with X=1");
    }
    const std::array<std::pair<const char*, long long>, 4> cells = {{
        {"X=0, Y=0", t.n00},
        {"X=0, Y=1", t.n01},
        {"X=1, Y=0", t.n10},
        {"X=1, Y=1", t.n11},
    }};
    for (const auto& [name, count] : cells) {
        if (count == 0) {
            throw Error(ErrorKind::separation,
                        fmt::format("fit_probit: empty contingency cell ({}); the maximum "
                                    "likelihood estimate does not exist",
                                    name));
        }
    }

    double beta0 = 0.0;
    double beta1 = 0.0;
    double ll = grouped_log_lik(t, beta0, beta0 + beta1);
    constexpr double kTol = 1e-10;
    constexpr int kMaxIter = 200;
    int iter = 0;
    double h00 = 0.0, h01 = 0.0, h11 = 0.0;
    for (; iter < kMaxIter; ++iter) {
        const auto d0 = group_derivs(t.n01, row0, beta0);
        const auto d1 = group_derivs(t.n11, row1, beta0 + beta1);
        const double g0 = d0.grad + d1.grad; // d ll / d beta0
        const double g1 = d1.grad;           // d ll / d beta1
        h00 = d0.hess + d1.hess;
        h01 = d1.hess;
        h11 = d1.hess;
        if (std::max(std::abs(g0), std::abs(g1)) < kTol) break;

        const double det = h00 * h11 - h01 * h01;
        if (!(std::abs(det) > 0.0)) {
            throw Error(ErrorKind::internal, "fit_probit: singular Hessian");
        }
        // Newton step: delta = -H^{-1} g.
        double step0 = -(h11 * g0 - h01 * g1) / det;
        double step1 = -(-h01 * g0 + h00 * g1) / det;
        double scale = 1.0;
        bool improved = false;
        // The acceptance slack must be relative to |ll|: near the optimum the
        // true improvement of a full Newton step drops below one ulp of ll, and
        // an absolute epsilon would reject it and stall the iteration.
        const double slack = 1e-12 * (1.0 + std::abs(ll));
        for (int backtrack = 0; backtrack < 60; ++backtrack) {
            const double b0 = beta0 + scale * step0;
            const double b1 = beta1 + scale * step1;
            const double candidate = grouped_log_lik(t, b0, b0 + b1);
            if (candidate >= ll - slack) {
                beta0 = b0;
                beta1 = b1;
                ll = candidate;
                improved = true;
                break;
            }
            scale *= 0.5;
        }
        if (!improved) {
            throw Error(ErrorKind::internal,
                        "fit_probit: Newton-Raphson failed to improve the log-likelihood");
        }
    }
    if (iter == kMaxIter) {
        throw Error(ErrorKind::internal,
                    fmt::format("fit_probit: no convergence after {} iterations", kMaxIter));
    }

    ProbitFit fit;
    fit.beta0 = beta0;
    fit.beta1 = beta1;
    fit.log_lik = ll;
    fit.n_iterations = iter;

    // Observed Fisher information is -H at the optimum; its inverse is the
    // asymptotic covariance of (beta0, beta1).
    const double det = h00 * h11 - h01 * h01;
    if (det == 0.0) {
        throw Error(ErrorKind::internal, "fit_probit: singular Hessian at optimum");
    }
    fit.se_beta0 = std::sqrt(-h11 / det);
    fit.se_beta1 = std::sqrt(-h00 / det);

    const long long successes = t.n01 + t.n11;
    const long long total = t.n();
    const double p_null = static_cast<double>(successes) / static_cast<double>(total);
    fit.null_log_lik = static_cast<double>(successes) * std::log(p_null) +
                       static_cast<double>(total - successes) * std::log1p(-p_null);
    fit.mcfadden_r2 = 1.0 - fit.log_lik / fit.null_log_lik;
    fit.lr_stat = std::max(0.0, 2.0 * (fit.log_lik - fit.null_log_lik));
    // Chi-squared(1) survival function: P(chi2 > x) = erfc(sqrt(x/2)).
    fit.lr_p_value = std::erfc(std::sqrt(fit.lr_stat / 2.0));
    return fit;
}

double PersistenceRow::observed_persistence() const {
    const long long row1 = table.n10 + table.n11;
    return row1 == 0 ? 0.0 : static_cast<double>(table.n11) / static_cast<double>(row1);
}

double PersistenceRow::observed_emergence() const {
    const long long row0 = table.n00 + table.n01;
    return row0 == 0 ? 0.0 : static_cast<double>(table.n01) / static_cast<double>(row0);
}

std::vector<PersistenceRow> persistence_report(
    const std::vector<SdsRanking>& early, const std::vector<SdsRanking>& benchmark,
    const std::map<std::string, std::string>& sds_to_uda) {
    std::map<std::string, const SdsRanking*> bench_by_sds;
    for (const auto& r : benchmark) bench_by_sds[r.sds_code] = &r;

    std::map<std::string, PersistenceRow> by_uda;
    for (const auto& e : early) {
        auto bench_it = bench_by_sds.find(e.sds_code);
        if (bench_it == bench_by_sds.end()) {
            throw Error(ErrorKind::internal,
                        fmt::format("persistence_report: SDS '{}' missing from benchmark "
                                    "rankings",
                                    e.sds_code));
        }
        auto uda_it = sds_to_uda.find(e.sds_code);
        if (uda_it == sds_to_uda.end()) {
            throw Error(ErrorKind::internal,
                        fmt::format("persistence_report: SDS '{}' has no UDA mapping",
                                    e.sds_code));
        }
        const SdsRanking& b = *bench_it->second;
        if (e.entries.size() != b.entries.size()) {
            throw Error(ErrorKind::internal,
                        fmt::format("persistence_report: researcher sets differ in SDS '{}'",
                                    e.sds_code));
        }
        auto& row = by_uda[uda_it->second];
        row.uda = uda_it->second;
        row.early_year = e.observation_year;
        row.benchmark_year = b.observation_year;
        for (std::size_t i = 0; i < e.entries.size(); ++i) {
            const auto& re = e.entries[i];
            const auto& rb = b.entries[i];
            if (re.researcher_id != rb.researcher_id) {
                throw Error(ErrorKind::internal,
                            fmt::format("persistence_report: researcher sets differ in SDS "
                                        "'{}' ('{}' vs '{}')",
                                        e.sds_code, re.researcher_id, rb.researcher_id));
            }
            if (re.top && rb.top) ++row.table.n11;
            else if (re.top && !rb.top) ++row.table.n10;
            else if (!re.top && rb.top) ++row.table.n01;
            else ++row.table.n00;
        }
    }

    std::vector<PersistenceRow> rows;
    rows.reserve(by_uda.size());
    for (auto& [_, row] : by_uda) {
        try {
            row.fit = fit_probit(row.table);
        } catch (const Error& err) {
            row.fit.reset();
            row.error = err.what();
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

} // namespace citewin
