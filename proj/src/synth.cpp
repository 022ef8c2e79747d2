#include "citewin/synth.hpp"

#include "citewin/errors.hpp"
#include "citewin/rng.hpp"

#include <fmt/core.h>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <utility>

namespace citewin {

namespace {

double parse_real(std::string_view text, const std::string& src, const std::string& field) {
    try {
        std::size_t used = 0;
        const std::string s(text);
        const double v = std::stod(s, &used);
        if (used != s.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw Error(ErrorKind::config,
                    fmt::format("{}: {}: not a number: '{}'", src, field, text));
    }
}

long long parse_integer(std::string_view text, const std::string& src,
                        const std::string& field) {
    try {
        std::size_t used = 0;
        const std::string s(text);
        const long long v = std::stoll(s, &used);
        if (used != s.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw Error(ErrorKind::config,
                    fmt::format("{}: {}: not an integer: '{}'", src, field, text));
    }
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) {
        s.remove_prefix(1);
    }
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
        s.remove_suffix(1);
    }
    return s;
}

std::vector<std::string_view> split_ws(std::string_view s) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < s.size()) {
        while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
        std::size_t start = i;
        while (i < s.size() && s[i] != ' ' && s[i] != '\t') ++i;
        if (i > start) out.push_back(s.substr(start, i - start));
    }
    return out;
}

SdsSpec parse_sds_line(std::string_view value, const std::string& src, std::size_t line_no) {
    SdsSpec spec;
    std::set<std::string> seen;
    const std::string where = fmt::format("{}:{}", src, line_no);
    for (std::string_view token : split_ws(value)) {
        const auto eq = token.find('=');
        if (eq == std::string_view::npos) {
            throw Error(ErrorKind::config,
                        fmt::format("{}: sds: expected key=value, got '{}'", where, token));
        }
        const std::string key(token.substr(0, eq));
        const std::string_view val = token.substr(eq + 1);
        if (!seen.insert(key).second) {
            throw Error(ErrorKind::config,
                        fmt::format("{}: sds: duplicate field '{}'", where, key));
        }
        if (key == "sds_code") {
            spec.sds_code = std::string(val);
        } else if (key == "uda_code") {
            spec.uda_code = std::string(val);
        } else if (key == "n_members") {
            spec.n_members = static_cast<int>(parse_integer(val, where, "n_members"));
        } else if (key == "mean_pubs_per_researcher") {
            spec.mean_pubs_per_researcher = parse_real(val, where, "mean_pubs_per_researcher");
        } else if (key == "aging_tau") {
            spec.aging_tau = parse_real(val, where, "aging_tau");
        } else if (key == "quality_sigma") {
            spec.quality_sigma = parse_real(val, where, "quality_sigma");
        } else if (key == "coauthorship_mean") {
            spec.coauthorship_mean = parse_real(val, where, "coauthorship_mean");
        } else if (key == "n_categories") {
            spec.n_categories = static_cast<int>(parse_integer(val, where, "n_categories"));
        } else if (key == "multi_category_share") {
            spec.multi_category_share = parse_real(val, where, "multi_category_share");
        } else {
            throw Error(ErrorKind::config,
                        fmt::format("{}: sds: unknown field '{}'", where, key));
        }
    }
    for (const char* required : {"sds_code", "uda_code", "n_members"}) {
        if (!seen.count(required)) {
            throw Error(ErrorKind::config,
                        fmt::format("{}: sds: missing required field '{}'", where, required));
        }
    }
    return spec;
}

} // namespace

void SynthConfig::validate() const {
    if (sds_specs.empty()) {
        throw Error(ErrorKind::config, "sds_specs must contain at least one entry");
    }
    std::set<std::string> codes;
    for (const auto& s : sds_specs) {
        const std::string ctx = s.sds_code.empty() ? std::string("<unnamed>") : s.sds_code;
        if (s.sds_code.empty()) {
            throw Error(ErrorKind::config, "sds_code must be non-empty");
        }
        if (s.uda_code.empty()) {
            throw Error(ErrorKind::config,
                        fmt::format("sds '{}': uda_code must be non-empty", ctx));
        }
        if (!codes.insert(s.sds_code).second) {
            throw Error(ErrorKind::config,
                        fmt::format("sds_code '{}' appears more than once", s.sds_code));
        }
        if (s.n_members < 1) {
            throw Error(ErrorKind::config,
                        fmt::format("sds '{}': n_members must be >= 1, got {}", ctx,
                                    s.n_members));
        }
        if (!(s.mean_pubs_per_researcher > 0.0)) {
            throw Error(ErrorKind::config,
                        fmt::format("sds '{}': mean_pubs_per_researcher must be positive, "
                                    "got {}",
                                    ctx, s.mean_pubs_per_researcher));
        }
        if (!(s.aging_tau > 0.0)) {
            throw Error(ErrorKind::config,
                        fmt::format("sds '{}': aging_tau must be positive, got {}", ctx,
                                    s.aging_tau));
        }
        if (!(s.quality_sigma >= 0.0)) {
            throw Error(ErrorKind::config,
                        fmt::format("sds '{}': quality_sigma must be non-negative, got {}",
                                    ctx, s.quality_sigma));
        }
        if (!(s.coauthorship_mean >= 1.0)) {
            throw Error(ErrorKind::config,
                        fmt::format("sds '{}': coauthorship_mean must be >= 1, got {}", ctx,
                                    s.coauthorship_mean));
        }
        if (s.n_categories < 1) {
            throw Error(ErrorKind::config,
                        fmt::format("sds '{}': n_categories must be >= 1, got {}", ctx,
                                    s.n_categories));
        }
        if (!(s.multi_category_share >= 0.0 && s.multi_category_share <= 1.0)) {
            throw Error(ErrorKind::config,
                        fmt::format("sds '{}': multi_category_share must lie in [0,1], "
                                    "got {}",
                                    ctx, s.multi_category_share));
        }
        if (s.multi_category_share > 0.0 && s.n_categories < 2) {
            throw Error(ErrorKind::config,
                        fmt::format("sds '{}': multi_category_share > 0 requires "
                                    "n_categories >= 2",
                                    ctx));
        }
    }
    corpus.validate();
}

SynthConfig default_synth_config() {
    SynthConfig config;
    config.seed = 42;
    config.corpus = CorpusConfig{};
    config.sds_specs = {
        {"GEO01", "UDA01", 40, 5.0, 5.0, 0.9, 2.0, 2, 0.25},
        {"PHYS02", "UDA02", 60, 7.0, 1.0, 0.9, 4.0, 3, 0.30},
        {"PHYS03", "UDA02", 25, 6.0, 2.0, 0.9, 3.0, 1, 0.0},
    };
    return config;
}

SynthConfig parse_synth_config_text(std::string_view text, const std::string& src) {
    SynthConfig config;
    config.corpus.observation_years.clear();
    bool saw_seed = false, saw_window = false, saw_years = false;

    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto nl = text.find('\n', pos);
        std::string_view line =
            nl == std::string_view::npos ? text.substr(pos) : text.substr(pos, nl - pos);
        pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
        ++line_no;

        line = trim(line);
        if (line.empty() || line.front() == '#') continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            throw Error(ErrorKind::config,
                        fmt::format("{}:{}: expected 'key = value'", src, line_no));
        }
        const std::string key(trim(line.substr(0, eq)));
        const std::string_view value = trim(line.substr(eq + 1));
        const std::string where = fmt::format("{}:{}", src, line_no);

        if (key == "seed") {
            const long long v = parse_integer(value, where, "seed");
            if (v < 0) {
                throw Error(ErrorKind::config,
                            fmt::format("{}: seed must be non-negative, got {}", where, v));
            }
            config.seed = static_cast<std::uint64_t>(v);
            saw_seed = true;
        } else if (key == "evaluation_window") {
            const auto colon = value.find(':');
            if (colon == std::string_view::npos) {
                throw Error(ErrorKind::config,
                            fmt::format("{}: evaluation_window must be 'start:end'", where));
            }
            config.corpus.window_start = static_cast<int>(
                parse_integer(trim(value.substr(0, colon)), where, "evaluation_window"));
            config.corpus.window_end = static_cast<int>(
                parse_integer(trim(value.substr(colon + 1)), where, "evaluation_window"));
            saw_window = true;
        } else if (key == "observation_years") {
            std::size_t i = 0;
            while (i <= value.size()) {
                auto comma = value.find(',', i);
                if (comma == std::string_view::npos) comma = value.size();
                const auto item = trim(value.substr(i, comma - i));
                if (item.empty()) {
                    throw Error(ErrorKind::config,
                                fmt::format("{}: observation_years: empty entry", where));
                }
                config.corpus.observation_years.push_back(
                    static_cast<int>(parse_integer(item, where, "observation_years")));
                i = comma + 1;
                if (comma == value.size()) break;
            }
            saw_years = true;
        } else if (key == "sds") {
            config.sds_specs.push_back(parse_sds_line(value, src, line_no));
        } else {
            throw Error(ErrorKind::config,
                        fmt::format("{}: unknown key '{}'", where, key));
        }
    }

    if (!saw_seed) throw Error(ErrorKind::config, fmt::format("{}: missing 'seed'", src));
    if (!saw_window) {
        throw Error(ErrorKind::config, fmt::format("{}: missing 'evaluation_window'", src));
    }
    if (!saw_years) {
        throw Error(ErrorKind::config, fmt::format("{}: missing 'observation_years'", src));
    }
    config.validate();
    return config;
}

SynthConfig parse_synth_config(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error(ErrorKind::config,
                    fmt::format("cannot open config file '{}'", path.string()));
    }
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return parse_synth_config_text(text, path.string());
}

namespace {

struct GeneratedPub {
    std::string pub_id;
    int pub_year;
    double q;
    std::vector<std::string> author_ids;
    std::vector<std::string> categories; // equal weights
};

double aging_cdf(double t, double tau) { return t <= 0.0 ? 0.0 : 1.0 - std::exp(-t / tau); }

} // namespace

SynthResult generate(const SynthConfig& config) {
    config.validate();

    const int last_year = config.corpus.observation_years.back();
    const int n_window_years = config.corpus.window_end - config.corpus.window_start + 1;

    // Pre-assign researcher ids so co-author draws can reference them.
    std::vector<Researcher> researchers;
    std::vector<std::size_t> sds_first_index; // global index of each spec's first member
    {
        std::size_t g = 0;
        for (const auto& spec : config.sds_specs) {
            sds_first_index.push_back(g);
            for (int m = 0; m < spec.n_members; ++m, ++g) {
                Researcher r;
                r.researcher_id = fmt::format("R{:06d}", g + 1);
                r.sds_code = spec.sds_code;
                r.uda_code = spec.uda_code;
                r.university_id = fmt::format("U{:02d}", g % 60 + 1);
                researchers.push_back(std::move(r));
            }
        }
    }

    std::vector<GeneratedPub> pubs;
    std::vector<CitationRow> citation_rows;
    std::size_t pub_counter = 0;

    for (std::size_t s = 0; s < config.sds_specs.size(); ++s) {
        const auto& spec = config.sds_specs[s];
        const std::size_t first = sds_first_index[s];
        for (int m = 0; m < spec.n_members; ++m) {
            const std::size_t g = first + static_cast<std::size_t>(m);
            RngStream rng(config.seed, static_cast<std::uint64_t>(g) + 1);

            const std::int64_t n_pubs = rng.next_poisson(spec.mean_pubs_per_researcher);
            for (std::int64_t p = 0; p < n_pubs; ++p) {
                GeneratedPub pub;
                pub.pub_id = fmt::format("P{:08d}", ++pub_counter);
                pub.pub_year = config.corpus.window_start +
                               static_cast<int>(rng.next_below(
                                   static_cast<std::uint64_t>(n_window_years)));
                pub.q = std::exp(spec.quality_sigma * rng.next_normal());

                // Owner plus co-authors drawn without replacement from the SDS.
                std::int64_t extra =
                    spec.coauthorship_mean > 1.0
                        ? rng.next_poisson(spec.coauthorship_mean - 1.0)
                        : 0;
                extra = std::min<std::int64_t>(extra, spec.n_members - 1);
                std::set<std::size_t> picked;
                while (static_cast<std::int64_t>(picked.size()) < extra) {
                    const std::size_t other =
                        first + rng.next_below(static_cast<std::uint64_t>(spec.n_members));
                    if (other != g) picked.insert(other);
                }
                pub.author_ids.push_back(researchers[g].researcher_id);
                for (std::size_t other : picked) {
                    pub.author_ids.push_back(researchers[other].researcher_id);
                }

                if (spec.n_categories == 1) {
                    pub.categories.push_back(fmt::format("{}#K1", spec.sds_code));
                } else {
                    const bool multi = rng.next_unit() < spec.multi_category_share;
                    const std::size_t c1 =
                        rng.next_below(static_cast<std::uint64_t>(spec.n_categories));
                    pub.categories.push_back(
                        fmt::format("{}#K{}", spec.sds_code, c1 + 1));
                    if (multi) {
                        std::size_t c2 = c1;
                        while (c2 == c1) {
                            c2 = rng.next_below(
                                static_cast<std::uint64_t>(spec.n_categories));
                        }
                        pub.categories.push_back(
                            fmt::format("{}#K{}", spec.sds_code, c2 + 1));
                    }
                }

                // Non-decreasing citation path: independent Poisson increments
                // with mean q * (F(u - py) - F(u - 1 - py)).
                std::int64_t cumulative = 0;
                std::size_t next_obs = 0;
                const auto& years = config.corpus.observation_years;
                for (int u = pub.pub_year; u <= last_year; ++u) {
                    const double lambda =
                        pub.q * (aging_cdf(u - pub.pub_year, spec.aging_tau) -
                                 aging_cdf(u - 1 - pub.pub_year, spec.aging_tau));
                    cumulative += rng.next_poisson(lambda);
                    while (next_obs < years.size() && years[next_obs] == u) {
                        citation_rows.push_back({pub.pub_id, u, cumulative, 0});
                        ++next_obs;
                    }
                }

                pubs.push_back(std::move(pub));
            }
        }
    }

    // Ground truth: latent expected SS with citations at their expectations
    // (q) and cell baselines at the median q of each (pub_year, category).
    std::map<std::string, double> expected_ss;
    {
        std::map<std::pair<int, std::string>, std::vector<double>> cell_q;
        for (const auto& p : pubs) {
            for (const auto& cat : p.categories) {
                cell_q[{p.pub_year, cat}].push_back(p.q);
            }
        }
        std::map<std::pair<int, std::string>, double> cell_median;
        for (auto& [key, values] : cell_q) {
            std::sort(values.begin(), values.end());
            const std::size_t n = values.size();
            cell_median[key] = n % 2 == 1
                                   ? values[n / 2]
                                   : 0.5 * (values[n / 2 - 1] + values[n / 2]);
        }
        for (const auto& r : researchers) expected_ss[r.researcher_id] = 0.0;
        for (const auto& p : pubs) {
            const double w = 1.0 / static_cast<double>(p.categories.size());
            double score = 0.0;
            for (const auto& cat : p.categories) {
                score += w * p.q / cell_median.at({p.pub_year, cat});
            }
            for (const auto& a : p.author_ids) expected_ss[a] += score;
        }
    }

    std::vector<Publication> publications;
    publications.reserve(pubs.size());
    for (auto& p : pubs) {
        Publication pub;
        pub.pub_id = std::move(p.pub_id);
        pub.pub_year = p.pub_year;
        pub.author_ids = std::move(p.author_ids);
        const double w = 1.0 / static_cast<double>(p.categories.size());
        for (auto& cat : p.categories) pub.categories.push_back({std::move(cat), w});
        publications.push_back(std::move(pub));
    }

    LoadResult loaded = build_corpus(std::move(researchers), std::move(publications),
                                     std::move(citation_rows), config.corpus);
    SynthResult result;
    result.corpus = std::move(loaded.corpus);
    result.report = std::move(loaded.report);
    result.expected_ss = std::move(expected_ss);
    return result;
}

SynthResult generate_to_dir(const SynthConfig& config, const std::filesystem::path& out_dir) {
    SynthResult result = generate(config);
    std::filesystem::create_directories(out_dir);
    write_corpus_csvs(result.corpus, out_dir / "researchers.csv",
                      out_dir / "publications.csv", out_dir / "citations.csv");

    nlohmann::json truth = nlohmann::json::object();
    for (const auto& [id, ss] : result.expected_ss) truth[id] = ss;
    std::ofstream out(out_dir / "ground_truth.json", std::ios::binary);
    if (!out) {
        throw Error(ErrorKind::config,
                    fmt::format("cannot write '{}'", (out_dir / "ground_truth.json").string()));
    }
    out << truth.dump(2) << '\n';
    return result;
}

} // namespace citewin
