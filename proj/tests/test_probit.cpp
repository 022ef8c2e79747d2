#include "citewin/errors.hpp"
#include "citewin/normal.hpp"
#include "citewin/probit.hpp"
#include "citewin/ranking.hpp"
#include "citewin/rng.hpp"

#include <doctest.h>

#include <cmath>
#include <map>
#include <string>
#include <vector>

using namespace citewin;

namespace {

// Closed form for the saturated two-group probit: each group's linear
// predictor is the normal quantile of its empirical success share.
struct ClosedForm {
    double beta0;
    double beta1;
};

ClosedForm closed_form(const ContingencyTable& t) {
    const double p0 = static_cast<double>(t.n01) / static_cast<double>(t.n00 + t.n01);
    const double p1 = static_cast<double>(t.n11) / static_cast<double>(t.n10 + t.n11);
    const double eta0 = normal_quantile(p0);
    const double eta1 = normal_quantile(p1);
    return {eta0, eta1 - eta0};
}

ContingencyTable random_table(RngStream& rng, long long max_cell = 500) {
    ContingencyTable t;
    t.n00 = 1 + static_cast<long long>(rng.next_below(max_cell));
    t.n01 = 1 + static_cast<long long>(rng.next_below(max_cell));
    t.n10 = 1 + static_cast<long long>(rng.next_below(max_cell));
    t.n11 = 1 + static_cast<long long>(rng.next_below(max_cell));
    return t;
}

SdsRanking ranking_with_tops(const std::string& sds, int year,
                             const std::vector<std::pair<std::string, bool>>& tops) {
    SdsRanking r;
    r.sds_code = sds;
    r.observation_year = year;
    for (const auto& [id, top] : tops) {
        RankedEntry e;
        e.researcher_id = id;
        e.top = top;
        r.entries.push_back(std::move(e));
    }
    std::sort(r.entries.begin(), r.entries.end(),
              [](const RankedEntry& a, const RankedEntry& b) {
                  return a.researcher_id < b.researcher_id;
              });
    return r;
}

} // namespace

TEST_CASE("normal cdf and pdf basics") {
    CHECK(normal_cdf(0.0) == 0.5); // exact
    CHECK(normal_sf(0.0) == 0.5);
    CHECK(normal_quantile(0.5) == 0.0);
    CHECK(normal_cdf(1.959963984540054) == doctest::Approx(0.975).epsilon(1e-12));
    CHECK(normal_cdf(-1.959963984540054) == doctest::Approx(0.025).epsilon(1e-12));
    CHECK(normal_pdf(0.0) == doctest::Approx(0.3989422804014327).epsilon(1e-15));
    // Symmetry.
    for (double x : {0.1, 0.7, 1.3, 2.9, 4.2}) {
        CHECK(normal_cdf(-x) == doctest::Approx(normal_sf(x)).epsilon(1e-15));
    }
    CHECK_THROWS_AS(normal_quantile(0.0), std::domain_error);
    CHECK_THROWS_AS(normal_quantile(1.0), std::domain_error);
    CHECK_THROWS_AS(normal_quantile(-0.5), std::domain_error);
}

TEST_CASE("quantile is the inverse of the cdf across both tails") {
    // Round-trip through the numerically faithful tail: cdf for x <= 0,
    // survival for x > 0 (1 - p loses the information near p = 1).
    for (double x = -6.0; x <= 6.0001; x += 0.01) {
        const double back = x <= 0.0 ? normal_quantile(normal_cdf(x))
                                     : -normal_quantile(normal_sf(x));
        CHECK(std::abs(back - x) < 1e-10);
    }
    // And p -> x -> p on a grid of probabilities.
    for (double p = 0.001; p < 0.9995; p += 0.001) {
        const double x = normal_quantile(p);
        CHECK(normal_cdf(x) == doctest::Approx(p).epsilon(1e-12));
    }
}

TEST_CASE("probit fit matches the closed-form solution") {
    RngStream rng(51001, 0);
    for (int trial = 0; trial < 300; ++trial) {
        const ContingencyTable t = random_table(rng);
        const ProbitFit fit = fit_probit(t);
        const ClosedForm cf = closed_form(t);
        CHECK(std::abs(fit.beta0 - cf.beta0) < 1e-8);
        CHECK(std::abs(fit.beta1 - cf.beta1) < 1e-8);

        // MLE identity: fitted probabilities equal the cell proportions.
        const double p0 = static_cast<double>(t.n01) / static_cast<double>(t.n00 + t.n01);
        const double p1 = static_cast<double>(t.n11) / static_cast<double>(t.n10 + t.n11);
        CHECK(normal_cdf(fit.beta0) == doctest::Approx(p0).epsilon(1e-10));
        CHECK(normal_cdf(fit.beta0 + fit.beta1) == doctest::Approx(p1).epsilon(1e-10));

        CHECK(fit.mcfadden_r2 >= -1e-12);
        CHECK(fit.mcfadden_r2 < 1.0);
        CHECK(fit.lr_stat >= 0.0);
        CHECK(fit.lr_p_value > 0.0);
        CHECK(fit.lr_p_value <= 1.0);
        CHECK(fit.log_lik <= 0.0);
        CHECK(fit.log_lik >= fit.null_log_lik - 1e-9);
    }
}

TEST_CASE("standard errors match the analytic grouped formula") {
    // Var(eta_j) = p(1-p) / (N phi(eta)^2); beta1 = eta1 - eta0 independent.
    RngStream rng(51002, 0);
    for (int trial = 0; trial < 50; ++trial) {
        const ContingencyTable t = random_table(rng, 2000);
        const ProbitFit fit = fit_probit(t);
        const double n0 = static_cast<double>(t.n00 + t.n01);
        const double n1 = static_cast<double>(t.n10 + t.n11);
        const double p0 = static_cast<double>(t.n01) / n0;
        const double p1 = static_cast<double>(t.n11) / n1;
        const double eta0 = fit.beta0;
        const double eta1 = fit.beta0 + fit.beta1;
        const double v0 = p0 * (1 - p0) / (n0 * normal_pdf(eta0) * normal_pdf(eta0));
        const double v1 = p1 * (1 - p1) / (n1 * normal_pdf(eta1) * normal_pdf(eta1));
        CHECK(fit.se_beta0 == doctest::Approx(std::sqrt(v0)).epsilon(1e-6));
        CHECK(fit.se_beta1 == doctest::Approx(std::sqrt(v0 + v1)).epsilon(1e-6));
    }
}

TEST_CASE("independence table gives beta1 near zero and a large p-value") {
    const ProbitFit fit = fit_probit({400, 100, 400, 100});
    CHECK(std::abs(fit.beta1) < 1e-9);
    CHECK(fit.lr_stat == doctest::Approx(0.0).epsilon(1e-9));
    CHECK(fit.lr_p_value == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(fit.mcfadden_r2 == doctest::Approx(0.0).epsilon(1e-9));
}

TEST_CASE("separation and degeneracy error cleanly with the cell named") {
    auto expect = [](const ContingencyTable& t, ErrorKind kind, const std::string& needle) {
        try {
            fit_probit(t);
            FAIL_CHECK("expected an error for " << needle);
        } catch (const Error& e) {
            CHECK(e.kind() == kind);
            CHECK_MESSAGE(std::string(e.what()).find(needle) != std::string::npos,
                          "message: " << e.what());
        }
    };
    expect({0, 5, 5, 5}, ErrorKind::separation, "X=0, Y=0");
    expect({5, 0, 5, 5}, ErrorKind::separation, "X=0, Y=1");
    expect({5, 5, 0, 5}, ErrorKind::separation, "X=1, Y=0");
    expect({5, 5, 5, 0}, ErrorKind::separation, "X=1, Y=1");
    expect({0, 0, 5, 5}, ErrorKind::degenerate, "X=0");
    expect({5, 5, 0, 0}, ErrorKind::degenerate, "X=1");
}

TEST_CASE("extreme but non-separated tables still converge") {
    const ProbitFit fit = fit_probit({10000, 1, 1, 10000});
    const ClosedForm cf = closed_form({10000, 1, 1, 10000});
    CHECK(fit.beta0 == doctest::Approx(cf.beta0).epsilon(1e-8));
    CHECK(fit.beta1 == doctest::Approx(cf.beta1).epsilon(1e-8));
    CHECK(fit.n_iterations < 200);
}

TEST_CASE("persistence report pools by UDA and isolates failures") {
    // S1,S2 -> U1 (clean); S3 -> U2 (separated: every early top stays top).
    std::map<std::string, std::string> sds_uda = {{"S1", "U1"}, {"S2", "U1"}, {"S3", "U2"}};

    std::vector<std::pair<std::string, bool>> s1_early, s1_bench;
    for (int i = 0; i < 10; ++i) {
        const std::string id = "A" + std::to_string(i);
        s1_early.emplace_back(id, i < 3);            // 3 early tops
        s1_bench.emplace_back(id, i < 2 || i == 5);  // 2 persist, 1 emerges
    }
    std::vector<std::pair<std::string, bool>> s2_early, s2_bench;
    for (int i = 0; i < 8; ++i) {
        const std::string id = "B" + std::to_string(i);
        s2_early.emplace_back(id, i < 2);
        s2_bench.emplace_back(id, i == 0 || i == 7);
    }
    std::vector<std::pair<std::string, bool>> s3_early, s3_bench;
    for (int i = 0; i < 6; ++i) {
        const std::string id = "C" + std::to_string(i);
        s3_early.emplace_back(id, i < 2);
        s3_bench.emplace_back(id, i < 2); // identical tops -> empty (1,0) cell
    }

    const std::vector<SdsRanking> early = {
        ranking_with_tops("S1", 2004, s1_early),
        ranking_with_tops("S2", 2004, s2_early),
        ranking_with_tops("S3", 2004, s3_early),
    };
    const std::vector<SdsRanking> bench = {
        ranking_with_tops("S1", 2008, s1_bench),
        ranking_with_tops("S2", 2008, s2_bench),
        ranking_with_tops("S3", 2008, s3_bench),
    };

    const auto rows = persistence_report(early, bench, sds_uda);
    REQUIRE(rows.size() == 2);

    // U1 pools S1 and S2: X=1 cells from 5 early tops (2+1 persist),
    // X=0 from 13 non-tops (1+1 emerge).
    CHECK(rows[0].uda == "U1");
    CHECK(rows[0].early_year == 2004);
    CHECK(rows[0].benchmark_year == 2008);
    CHECK(rows[0].table.n11 == 3);
    CHECK(rows[0].table.n10 == 2);
    CHECK(rows[0].table.n01 == 2);
    CHECK(rows[0].table.n00 == 11);
    REQUIRE(rows[0].fit.has_value());
    CHECK(rows[0].observed_persistence() == doctest::Approx(3.0 / 5.0));
    CHECK(normal_cdf(rows[0].fit->beta0 + rows[0].fit->beta1) ==
          doctest::Approx(3.0 / 5.0).epsilon(1e-10));

    CHECK(rows[1].uda == "U2");
    CHECK_FALSE(rows[1].fit.has_value());
    // Both off-diagonal cells are empty here; the fit reports the first one
    // encountered in its fixed cell order, which is (X=0, Y=1).
    CHECK(rows[1].error.find("X=0, Y=1") != std::string::npos);
    CHECK(rows[1].observed_persistence() == 1.0);
}

TEST_CASE("persistence report validates alignment") {
    std::map<std::string, std::string> sds_uda = {{"S1", "U1"}};
    const auto early = ranking_with_tops("S1", 2004, {{"A", true}, {"B", false}});
    const auto missing = ranking_with_tops("S2", 2008, {{"A", true}, {"B", false}});
    CHECK_THROWS_AS(persistence_report({early}, {missing}, sds_uda), Error);
    const auto wrong_ids = ranking_with_tops("S1", 2008, {{"A", true}, {"C", false}});
    CHECK_THROWS_AS(persistence_report({early}, {wrong_ids}, sds_uda), Error);
}
