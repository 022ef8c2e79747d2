#pragma once

#include "citewin/corpus.hpp"
#include "citewin/score.hpp"

#include <filesystem>
#include <iosfwd>
#include <vector>

namespace citewin {

struct RunConfig {
    std::filesystem::path researchers_path;
    std::filesystem::path publications_path;
    std::filesystem::path citations_path;
    std::filesystem::path out_dir;
    CorpusConfig corpus;
    int benchmark_year = 0; // 0 = last observation year
    double min_publishing_share = 0.5;
    int min_members = 10;
    int top_percentile = 80;
    CountingRule counting = CountingRule::full;
    std::vector<int> histogram_edges = {20, 40};

    int effective_benchmark() const {
        return benchmark_year == 0 ? corpus.observation_years.back() : benchmark_year;
    }
    void validate() const; // throws Error(config)
};

// Full pipeline: load -> filter -> medians -> SS -> rankings per observation
// year -> stability vs benchmark -> quartile transitions -> probit. Writes
// the report bundle (CSVs + load_report.json + manifest.json) into out_dir.
void run_analyze(const RunConfig& config);

// Corpus validation only; streams the load report as JSON to `out`.
void run_validate(const std::filesystem::path& researchers_path,
                  const std::filesystem::path& publications_path,
                  const std::filesystem::path& citations_path, const CorpusConfig& config,
                  std::ostream& out);

// CLI-facing wrappers: catch Error, print one structured line to stderr and
// map the kind to an exit code (config -> 2, anything else -> 1).
int cmd_analyze(const RunConfig& config);
int cmd_validate(const std::filesystem::path& researchers_path,
                 const std::filesystem::path& publications_path,
                 const std::filesystem::path& citations_path, const CorpusConfig& config);
// Empty config_path uses the built-in default configuration.
int cmd_simulate(const std::filesystem::path& config_path,
                 const std::filesystem::path& out_dir);

} // namespace citewin
