#include "citewin/pipeline.hpp"

#include "citewin/baseline.hpp"
#include "citewin/csv.hpp"
#include "citewin/errors.hpp"
#include "citewin/normal.hpp"
#include "citewin/probit.hpp"
#include "citewin/ranking.hpp"
#include "citewin/stability.hpp"
#include "citewin/synth.hpp"

#include <fmt/core.h>
#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <string>

namespace citewin {

namespace {

using json = nlohmann::json;
using Clock = std::chrono::steady_clock;

std::int64_t ms_since(Clock::time_point start) {
    return std::chrono::duration_cast<std::chrono::milliseconds>(Clock::now() - start).count();
}

json load_report_json(const LoadReport& load, const FilterReport* filter) {
    json j;
    j["n_researchers"] = load.n_researchers;
    j["n_publications"] = load.n_publications;
    j["n_citation_rows"] = load.n_citation_rows;

    json defaulted = json::object();
    defaulted["n"] = load.n_defaulted;
    json listed = json::array();
    for (const auto& d : load.defaulted) {
        listed.push_back({{"pub_id", d.pub_id}, {"observation_year", d.observation_year}});
    }
    defaulted["listed"] = std::move(listed);
    defaulted["listed_cap"] = LoadReport::kMaxListedDefaults;
    j["defaulted_citations"] = std::move(defaulted);

    json per_sds = json::array();
    for (const auto& s : load.per_sds) {
        per_sds.push_back({{"sds_code", s.sds_code},
                           {"uda_code", s.uda_code},
                           {"members", s.members},
                           {"publishing_members", s.publishing_members},
                           {"publications", s.publications}});
    }
    j["per_sds"] = std::move(per_sds);

    json per_uda = json::array();
    for (const auto& u : load.per_uda) {
        per_uda.push_back({{"uda_code", u.uda_code},
                           {"research_staff", u.research_staff},
                           {"publications", u.publications},
                           {"sds", u.sds},
                           {"universities", u.universities}});
    }
    j["per_uda"] = std::move(per_uda);

    if (filter != nullptr) {
        json f;
        f["kept"] = filter->kept;
        json removed = json::array();
        for (const auto& r : filter->removed) {
            removed.push_back({{"sds_code", r.sds_code},
                               {"members", r.members},
                               {"publishing_members", r.publishing_members},
                               {"publishing_share", r.publishing_share},
                               {"reason", r.reason}});
        }
        f["removed"] = std::move(removed);
        j["filter"] = std::move(f);
    }
    return j;
}

void write_json(const json& j, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw Error(ErrorKind::config, fmt::format("cannot write '{}'", path.string()));
    }
    out << j.dump(2) << '\n';
}

std::string opt6(const std::optional<double>& v) { return v ? fixed6(*v) : std::string(); }
std::string opt_int(const std::optional<int>& v) {
    return v ? std::to_string(*v) : std::string();
}

} // namespace

void RunConfig::validate() const {
    corpus.validate();
    const int bench = effective_benchmark();
    if (std::find(corpus.observation_years.begin(), corpus.observation_years.end(), bench) ==
        corpus.observation_years.end()) {
        throw Error(ErrorKind::config,
                    fmt::format("benchmark year {} is not an observation year", bench));
    }
    if (!(min_publishing_share >= 0.0 && min_publishing_share <= 1.0)) {
        throw Error(ErrorKind::config,
                    fmt::format("min_publishing_share must lie in [0,1], got {}",
                                min_publishing_share));
    }
    if (min_members < 0) {
        throw Error(ErrorKind::config,
                    fmt::format("min_members must be non-negative, got {}", min_members));
    }
    if (top_percentile < 0 || top_percentile > 100) {
        throw Error(ErrorKind::config,
                    fmt::format("top percentile threshold must lie in [0,100], got {}",
                                top_percentile));
    }
    if (histogram_edges.empty()) {
        throw Error(ErrorKind::config, "histogram edges must be non-empty");
    }
    for (int e : histogram_edges) {
        if (e <= 0 || e > 100) {
            throw Error(ErrorKind::config,
                        fmt::format("histogram edges must lie in [1,100], got {}", e));
        }
    }
    if (out_dir.empty()) {
        throw Error(ErrorKind::config, "output directory must be given");
    }
}

void run_analyze(const RunConfig& rc) {
    rc.validate();
    const auto t_total = Clock::now();
    std::map<std::string, std::int64_t> timings;

    auto t = Clock::now();
    LoadResult loaded =
        load_corpus(rc.researchers_path, rc.publications_path, rc.citations_path, rc.corpus);
    timings["load"] = ms_since(t);

    t = Clock::now();
    FilterResult filtered =
        filter_eligible_sds(loaded.corpus, rc.min_publishing_share, rc.min_members);
    const Corpus& corpus = filtered.corpus;
    timings["filter"] = ms_since(t);

    std::filesystem::create_directories(rc.out_dir);

    // Per observation year: medians -> SS -> per-SDS rankings.
    t = Clock::now();
    const auto by_sds = corpus.researchers_by_sds();
    std::vector<BaselineTable> baselines;
    std::vector<ScoreTable> scores;
    std::map<int, std::vector<SdsRanking>> rankings_by_year;
    for (int year : corpus.observation_years) {
        BaselineTable table = compute_medians(corpus, year);
        ScoreTable score = compute_ss(corpus, table, year, rc.counting);
        auto& rankings = rankings_by_year[year];
        for (const auto& [sds, indices] : by_sds) {
            std::vector<std::pair<std::string, double>> sds_scores;
            sds_scores.reserve(indices.size());
            for (std::size_t i : indices) {
                const auto& id = corpus.researchers[i].researcher_id;
                const ScientificStrength* row = score.find(id);
                if (row == nullptr) {
                    throw Error(ErrorKind::internal,
                                fmt::format("researcher '{}' missing from score table", id));
                }
                sds_scores.emplace_back(id, row->value);
            }
            rankings.push_back(rank_sds(sds, year, std::move(sds_scores), rc.top_percentile));
        }
        baselines.push_back(std::move(table));
        scores.push_back(std::move(score));
    }
    timings["score"] = ms_since(t);

    // Stability of each non-benchmark year against the benchmark.
    t = Clock::now();
    const int bench = rc.effective_benchmark();
    const auto& bench_rankings = rankings_by_year.at(bench);
    std::map<std::string, const SdsRanking*> bench_by_sds;
    for (const auto& r : bench_rankings) bench_by_sds[r.sds_code] = &r;
    const auto sds_uda = corpus.sds_uda_map();

    struct YearStability {
        int early_year;
        std::vector<std::pair<std::string, ShiftStats>> per_sds; // sds -> stats
        std::vector<ShiftRecord> all_shifts;
        std::vector<TransitionCounts> transitions;
        std::vector<HistogramBin> histogram;
    };
    std::vector<YearStability> stability;
    for (const auto& [year, rankings] : rankings_by_year) {
        if (year == bench) continue;
        YearStability ys;
        ys.early_year = year;
        std::vector<QuartileObs> obs;
        for (const auto& ranking : rankings) {
            const SdsRanking& b = *bench_by_sds.at(ranking.sds_code);
            auto shifts = compute_shifts(ranking, b);
            ys.per_sds.emplace_back(ranking.sds_code, shift_stats(shifts, ranking, b));
            for (std::size_t i = 0; i < ranking.entries.size(); ++i) {
                const auto& uda = sds_uda.at(ranking.sds_code);
                obs.push_back({ranking.entries[i].researcher_id, uda,
                               ranking.entries[i].quartile, b.entries[i].quartile});
                obs.push_back({ranking.entries[i].researcher_id, "TOTAL",
                               ranking.entries[i].quartile, b.entries[i].quartile});
            }
            ys.all_shifts.insert(ys.all_shifts.end(), shifts.begin(), shifts.end());
        }
        ys.transitions = quartile_transitions(obs, year);
        ys.histogram = shift_histogram(ys.all_shifts, rc.histogram_edges);
        stability.push_back(std::move(ys));
    }
    const ConvergenceSeries convergence = convergence_series(rankings_by_year, bench);
    timings["stability"] = ms_since(t);

    // Probit persistence: earliest non-benchmark observation year vs benchmark.
    t = Clock::now();
    std::vector<PersistenceRow> persistence;
    for (int year : corpus.observation_years) {
        if (year == bench) continue;
        persistence = persistence_report(rankings_by_year.at(year), bench_rankings, sds_uda);
        break;
    }
    timings["probit"] = ms_since(t);

    t = Clock::now();
    write_json(load_report_json(loaded.report, &filtered.report),
               rc.out_dir / "load_report.json");

    {
        CsvWriter w(rc.out_dir / "baselines.csv");
        w.write_row({"pub_year", "category", "observation_year", "n_cited", "median"});
        for (const auto& table : baselines) write_baseline_csv(table, w);
    }
    {
        CsvWriter w(rc.out_dir / "scores.csv");
        w.write_row({"observation_year", "researcher_id", "sds_code", "ss", "n_pubs"});
        for (const auto& score : scores) {
            for (const auto& row : score.rows) {
                const Researcher* r = corpus.find_researcher(row.researcher_id);
                w.write_row({std::to_string(score.observation_year), row.researcher_id,
                             r ? r->sds_code : std::string(), fixed6(row.value),
                             std::to_string(row.n_pubs)});
            }
        }
    }
    {
        CsvWriter w(rc.out_dir / "rankings.csv");
        w.write_row({"observation_year", "sds_code", "researcher_id", "ss", "percentile",
                     "quartile", "top"});
        for (const auto& [year, rankings] : rankings_by_year) {
            for (const auto& ranking : rankings) {
                for (const auto& e : ranking.entries) {
                    w.write_row({std::to_string(year), ranking.sds_code, e.researcher_id,
                                 fixed6(e.ss), std::to_string(e.percentile),
                                 std::to_string(e.quartile), e.top ? "1" : "0"});
                }
            }
        }
    }
    {
        CsvWriter w(rc.out_dir / "shifts.csv");
        w.write_row({"early_year", "sds_code", "researcher_id", "delta"});
        for (const auto& ys : stability) {
            for (const auto& s : ys.all_shifts) {
                w.write_row({std::to_string(s.early_year), s.sds_code, s.researcher_id,
                             std::to_string(s.delta)});
            }
        }
    }
    {
        CsvWriter w(rc.out_dir / "shift_stats.csv");
        w.write_row({"early_year", "sds_code", "n", "spearman", "pct_changed_total",
                     "pct_changed_pos", "pct_changed_neg", "mean_abs", "median_abs",
                     "stddev_abs", "max_abs_signed", "mean_pos", "median_pos", "max_pos",
                     "mean_neg", "median_neg", "max_neg"});
        for (const auto& ys : stability) {
            for (const auto& [sds, st] : ys.per_sds) {
                w.write_row({std::to_string(ys.early_year), sds, std::to_string(st.n),
                             fixed6(st.spearman), fixed6(st.pct_changed_total),
                             fixed6(st.pct_changed_pos), fixed6(st.pct_changed_neg),
                             fixed6(st.mean_abs), fixed6(st.median_abs),
                             fixed6(st.stddev_abs), std::to_string(st.max_abs_signed),
                             opt6(st.mean_pos), opt6(st.median_pos), opt_int(st.max_pos),
                             opt6(st.mean_neg), opt6(st.median_neg), opt_int(st.max_neg)});
            }
        }
    }
    {
        CsvWriter w(rc.out_dir / "transitions.csv");
        w.write_row({"early_year", "group", "population", "n_changed_any",
                     "share_changed_any", "n_outliers", "share_outliers"});
        for (const auto& ys : stability) {
            for (const auto& tr : ys.transitions) {
                w.write_row({std::to_string(ys.early_year), tr.group,
                             std::to_string(tr.population), std::to_string(tr.n_changed_any),
                             fixed6(tr.share_changed_any), std::to_string(tr.n_outliers),
                             fixed6(tr.share_outliers)});
            }
        }
    }
    {
        CsvWriter w(rc.out_dir / "histogram.csv");
        w.write_row({"early_year", "bin_low", "bin_high", "count"});
        for (const auto& ys : stability) {
            for (const auto& b : ys.histogram) {
                w.write_row({std::to_string(ys.early_year), std::to_string(b.low),
                             std::to_string(b.high), std::to_string(b.count)});
            }
        }
    }
    {
        CsvWriter w(rc.out_dir / "convergence.csv");
        w.write_row({"early_year", "sds_code", "spearman", "mean_abs_shift"});
        for (const auto& p : convergence.per_sds) {
            w.write_row({std::to_string(p.early_year), p.sds_code, fixed6(p.spearman),
                         fixed6(p.mean_abs)});
        }
    }
    {
        CsvWriter w(rc.out_dir / "cumulative.csv");
        w.write_row({"metric", "early_year", "threshold", "share_of_sds"});
        for (const auto& p : convergence.cumulative) {
            w.write_row({p.metric, std::to_string(p.early_year), fixed6(p.threshold),
                         fixed6(p.share_of_sds)});
        }
    }
    {
        CsvWriter w(rc.out_dir / "probit.csv");
        w.write_row({"uda_code", "early_year", "benchmark_year", "n", "n00", "n01", "n10",
                     "n11", "beta0", "beta1", "se_beta0", "se_beta1", "phi_b0_plus_b1",
                     "observed_persistence", "mcfadden_r2", "lr_stat", "lr_p_value",
                     "n_iterations", "error"});
        for (const auto& row : persistence) {
            std::vector<std::string> fields = {
                row.uda, std::to_string(row.early_year), std::to_string(row.benchmark_year),
                std::to_string(row.table.n()), std::to_string(row.table.n00),
                std::to_string(row.table.n01), std::to_string(row.table.n10),
                std::to_string(row.table.n11)};
            if (row.fit) {
                const ProbitFit& f = *row.fit;
                fields.insert(fields.end(),
                              {fixed6(f.beta0), fixed6(f.beta1), fixed6(f.se_beta0),
                               fixed6(f.se_beta1), fixed6(normal_cdf(f.beta0 + f.beta1)),
                               fixed6(row.observed_persistence()), fixed6(f.mcfadden_r2),
                               fixed6(f.lr_stat), fixed6(f.lr_p_value),
                               std::to_string(f.n_iterations), ""});
            } else {
                fields.insert(fields.end(), {"", "", "", "", "",
                                             fixed6(row.observed_persistence()), "", "", "",
                                             "", row.error});
            }
            w.write_row(fields);
        }
    }
    timings["write"] = ms_since(t);
    timings["total"] = ms_since(t_total);

    json manifest;
    manifest["command"] = "analyze";
    json cfg;
    cfg["researchers"] = rc.researchers_path.string();
    cfg["publications"] = rc.publications_path.string();
    cfg["citations"] = rc.citations_path.string();
    cfg["out"] = rc.out_dir.string();
    cfg["evaluation_window"] = {rc.corpus.window_start, rc.corpus.window_end};
    cfg["observation_years"] = rc.corpus.observation_years;
    cfg["benchmark_year"] = bench;
    cfg["min_publishing_share"] = rc.min_publishing_share;
    cfg["min_members"] = rc.min_members;
    cfg["top_percentile"] = rc.top_percentile;
    cfg["counting"] = to_string(rc.counting);
    cfg["histogram_edges"] = rc.histogram_edges;
    manifest["config"] = std::move(cfg);

    json corpus_counts;
    corpus_counts["n_researchers"] = static_cast<std::int64_t>(corpus.researchers.size());
    corpus_counts["n_publications"] = static_cast<std::int64_t>(corpus.publications.size());
    corpus_counts["n_sds"] = static_cast<std::int64_t>(by_sds.size());
    json per_uda = json::array();
    for (const auto& u : tally_by_uda(corpus)) {
        per_uda.push_back({{"uda_code", u.uda_code},
                           {"research_staff", u.research_staff},
                           {"publications", u.publications},
                           {"sds", u.sds},
                           {"universities", u.universities}});
    }
    corpus_counts["per_uda"] = std::move(per_uda);
    manifest["corpus"] = std::move(corpus_counts);

    json jt;
    for (const auto& [k, v] : timings) jt[k] = v;
    manifest["timings_ms"] = std::move(jt);
    write_json(manifest, rc.out_dir / "manifest.json");
}

void run_validate(const std::filesystem::path& researchers_path,
                  const std::filesystem::path& publications_path,
                  const std::filesystem::path& citations_path, const CorpusConfig& config,
                  std::ostream& out) {
    config.validate();
    LoadResult loaded = load_corpus(researchers_path, publications_path, citations_path, config);
    out << load_report_json(loaded.report, nullptr).dump(2) << '\n';
}

namespace {

int exit_code_for(const Error& e) { return e.kind() == ErrorKind::config ? 2 : 1; }

int run_cli(const char* command, const std::function<void()>& body) {
    try {
        body();
        return 0;
    } catch (const Error& e) {
        std::cerr << "citewin " << command << ": error: " << e.what() << '\n';
        return exit_code_for(e);
    } catch (const std::exception& e) {
        std::cerr << "citewin " << command << ": internal error: " << e.what() << '\n';
        return 1;
    }
}

} // namespace

int cmd_analyze(const RunConfig& config) {
    return run_cli("analyze", [&] { run_analyze(config); });
}

int cmd_validate(const std::filesystem::path& researchers_path,
                 const std::filesystem::path& publications_path,
                 const std::filesystem::path& citations_path, const CorpusConfig& config) {
    return run_cli("validate", [&] {
        run_validate(researchers_path, publications_path, citations_path, config, std::cout);
    });
}

int cmd_simulate(const std::filesystem::path& config_path,
                 const std::filesystem::path& out_dir) {
    return run_cli("simulate", [&] {
        const SynthConfig config =
            config_path.empty() ? default_synth_config() : parse_synth_config(config_path);
        if (out_dir.empty()) {
            throw Error(ErrorKind::config, "output directory must be given");
        }
        generate_to_dir(config, out_dir);
    });
}

} // namespace citewin
