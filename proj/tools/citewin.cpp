#include "citewin/corpus.hpp"
#include "citewin/errors.hpp"
#include "citewin/pipeline.hpp"
#include "citewin/score.hpp"

#include <CLI11.hpp>
#include <fmt/core.h>

#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

namespace {

// "2001:2003" -> (start, end).
std::pair<int, int> parse_window(const std::string& text) {
    const auto colon = text.find(':');
    if (colon == std::string::npos) {
        throw CLI::ValidationError("--window", "expected START:END, e.g. 2001:2003");
    }
    try {
        return {std::stoi(text.substr(0, colon)), std::stoi(text.substr(colon + 1))};
    } catch (const std::exception&) {
        throw CLI::ValidationError("--window", "years must be integers");
    }
}

constexpr const char* kConfigHelp = R"(Synthetic corpus configuration (flat key-value file):
  # lines starting with '#' are comments
  seed = 42
  evaluation_window = 2001:2003
  observation_years = 2004,2005,2006,2007,2008
  sds = sds_code=GEO01 uda_code=UDA01 n_members=40 mean_pubs_per_researcher=5.0 aging_tau=5.0 quality_sigma=0.9 coauthorship_mean=2.0 n_categories=2 multi_category_share=0.25

One 'sds' line per discipline. Required sds fields: sds_code, uda_code,
n_members; the rest default to mean_pubs_per_researcher=6, aging_tau=2,
quality_sigma=1, coauthorship_mean=3, n_categories=1, multi_category_share=0.
Omitting --config simulates the built-in default configuration.)";

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"citewin: rank-stability analysis of field-normalized research productivity "
                 "under successive citation observation windows"};
    app.require_subcommand(1);

    // --- simulate ---------------------------------------------------------
    auto* simulate = app.add_subcommand("simulate", "Generate a seeded synthetic corpus");
    simulate->footer(kConfigHelp);
    std::string sim_config;
    std::string sim_out;
    simulate->add_option("--config", sim_config, "Configuration file (omit for the default)");
    simulate->add_option("--out", sim_out, "Output directory")->required();

    // --- analyze ----------------------------------------------------------
    auto* analyze =
        app.add_subcommand("analyze", "Run the full scoring / ranking / stability pipeline");
    std::string researchers, publications, citations, out_dir;
    std::string window = "2001:2003";
    std::vector<int> observe = {2004, 2005, 2006, 2007, 2008};
    int benchmark = 0;
    double min_share = 0.5;
    int min_members = 10;
    int top = 80;
    std::string counting = "full";
    std::vector<int> bins = {20, 40};
    analyze->add_option("--researchers", researchers, "researchers.csv path")->required();
    analyze->add_option("--publications", publications, "publications.csv path")->required();
    analyze->add_option("--citations", citations, "citations.csv path")->required();
    analyze->add_option("--out", out_dir, "Report output directory")->required();
    analyze->add_option("--window", window, "Evaluation window START:END")
        ->capture_default_str();
    analyze->add_option("--observe", observe, "Observation years (strictly increasing)")
        ->delimiter(',')
        ->capture_default_str();
    analyze->add_option("--benchmark", benchmark,
                        "Benchmark observation year (default: last observation year)");
    analyze->add_option("--min-share", min_share, "Minimum SDS publishing share")
        ->capture_default_str();
    analyze->add_option("--min-members", min_members, "Minimum SDS member count")
        ->capture_default_str();
    analyze->add_option("--top", top, "Top-scientist percentile threshold (strictly above)")
        ->capture_default_str();
    analyze->add_option("--counting", counting, "Counting rule: full or equal-split")
        ->capture_default_str();
    analyze->add_option("--bins", bins, "Positive histogram edges for percentile shifts")
        ->delimiter(',')
        ->capture_default_str();

    // --- validate ---------------------------------------------------------
    auto* validate = app.add_subcommand(
        "validate", "Validate corpus files and print the load report as JSON");
    std::vector<std::string> paths;
    validate
        ->add_option("paths", paths,
                     "researchers.csv publications.csv citations.csv")
        ->expected(3);
    std::string v_window = "2001:2003";
    std::vector<int> v_observe = {2004, 2005, 2006, 2007, 2008};
    validate->add_option("--window", v_window, "Evaluation window START:END")
        ->capture_default_str();
    validate->add_option("--observe", v_observe, "Observation years")
        ->delimiter(',')
        ->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        // CLI11 prints help itself for -h; usage errors get exit code 2.
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        if (simulate->parsed()) {
            return citewin::cmd_simulate(sim_config, sim_out);
        }
        if (analyze->parsed()) {
            citewin::RunConfig rc;
            rc.researchers_path = researchers;
            rc.publications_path = publications;
            rc.citations_path = citations;
            rc.out_dir = out_dir;
            const auto [ws, we] = parse_window(window);
            rc.corpus.window_start = ws;
            rc.corpus.window_end = we;
            rc.corpus.observation_years = observe;
            rc.benchmark_year = benchmark;
            rc.min_publishing_share = min_share;
            rc.min_members = min_members;
            rc.top_percentile = top;
            rc.counting = citewin::parse_counting_rule(counting);
            rc.histogram_edges = bins;
            return citewin::cmd_analyze(rc);
        }
        // validate
        citewin::CorpusConfig config;
        const auto [ws, we] = parse_window(v_window);
        config.window_start = ws;
        config.window_end = we;
        config.observation_years = v_observe;
        return citewin::cmd_validate(paths[0], paths[1], paths[2], config);
    } catch (const CLI::ValidationError& e) {
        std::cerr << "citewin: error: " << e.what() << '\n';
        return 2;
    } catch (const citewin::Error& e) {
        std::cerr << "citewin: error: " << e.what() << '\n';
        return e.kind() == citewin::ErrorKind::config ? 2 : 1;
    } catch (const std::exception& e) {
        std::cerr << "citewin: internal error: " << e.what() << '\n';
        return 1;
    }
}
