#pragma once

#include "citewin/corpus.hpp"

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace citewin {

// Per-discipline knobs of the synthetic corpus generator.
struct SdsSpec {
    std::string sds_code;
    std::string uda_code;
    int n_members = 0;
    double mean_pubs_per_researcher = 6.0;
    double aging_tau = 2.0;               // years; citation accrual F(t) = 1 - exp(-t/tau)
    double quality_sigma = 1.0;           // q ~ lognormal(0, sigma)
    double coauthorship_mean = 3.0;       // authors ~ 1 + Poisson(mean - 1)
    int n_categories = 1;                 // per-SDS category pool size
    double multi_category_share = 0.0;    // fraction of pubs with two categories

    friend bool operator==(const SdsSpec&, const SdsSpec&) = default;
};

struct SynthConfig {
    std::uint64_t seed = 1;
    std::vector<SdsSpec> sds_specs;
    CorpusConfig corpus; // evaluation window + observation years

    void validate() const; // throws Error(config) naming the offending field
};

// Three SDSs over two UDAs: a sane end-to-end demo configuration.
SynthConfig default_synth_config();

// Flat key-value config format (documented in the CLI help):
//   seed = 42
//   evaluation_window = 2001:2003
//   observation_years = 2004,2005,2006,2007,2008
//   sds = sds_code=GEO01 uda_code=UDA01 n_members=40 aging_tau=5.0 ...
// One `sds` line per discipline; sds tokens use the SdsSpec field names.
SynthConfig parse_synth_config(const std::filesystem::path& path);
SynthConfig parse_synth_config_text(std::string_view text, const std::string& src);

struct SynthResult {
    Corpus corpus;
    LoadReport report;
    // Ground truth: researcher id -> latent expected Scientific Strength at
    // t -> infinity (citation counts replaced by their expectations q, cell
    // baselines by the median q of the cell).
    std::map<std::string, double> expected_ss;
};

// Fully deterministic given config.seed: per-researcher counter-based RNG
// sub-streams make the output independent of generation order.
SynthResult generate(const SynthConfig& config);

// generate() + researchers.csv / publications.csv / citations.csv /
// ground_truth.json under out_dir (created if absent).
SynthResult generate_to_dir(const SynthConfig& config, const std::filesystem::path& out_dir);

} // namespace citewin
