#include "citewin/corpus.hpp"

#include "citewin/csv.hpp"
#include "citewin/errors.hpp"

#include <fmt/core.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <set>
#include <unordered_map>
#include <unordered_set>

namespace citewin {

namespace {

std::string at(const std::string& src, std::size_t line) {
    return line > 0 ? fmt::format("{}:{}", src, line) : src;
}

int parse_int(const std::string& s, const std::string& src, std::size_t line,
              const std::string& field) {
    int value = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (ec != std::errc{} || ptr != s.data() + s.size()) {
        throw Error(ErrorKind::schema,
                    fmt::format("{}: {}: not an integer: '{}'", at(src, line), field, s));
    }
    return value;
}

std::int64_t parse_count(const std::string& s, const std::string& src, std::size_t line,
                         const std::string& field) {
    std::int64_t value = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (ec != std::errc{} || ptr != s.data() + s.size()) {
        throw Error(ErrorKind::schema,
                    fmt::format("{}: {}: not an integer: '{}'", at(src, line), field, s));
    }
    if (value < 0) {
        throw Error(ErrorKind::schema,
                    fmt::format("{}: {}: negative count {}", at(src, line), field, value));
    }
    return value;
}

double parse_weight(const std::string& s, const std::string& src, std::size_t line) {
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (ec != std::errc{} || ptr != s.data() + s.size() || !std::isfinite(value)) {
        throw Error(ErrorKind::schema,
                    fmt::format("{}: categories: bad weight '{}'", at(src, line), s));
    }
    return value;
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= s.size(); ++i) {
        if (i == s.size() || s[i] == sep) {
            out.push_back(s.substr(start, i - start));
            start = i + 1;
        }
    }
    return out;
}

void expect_header(const std::vector<std::string>& row, const std::vector<std::string>& expected,
                   const std::string& src) {
    if (row != expected) {
        std::string want;
        for (std::size_t i = 0; i < expected.size(); ++i) {
            if (i) want += ',';
            want += expected[i];
        }
        throw Error(ErrorKind::schema, fmt::format("{}:1: bad header, expected '{}'", src, want));
    }
}

} // namespace

void CorpusConfig::validate() const {
    if (window_start > window_end) {
        throw Error(ErrorKind::config,
                    fmt::format("window_start {} exceeds window_end {}", window_start, window_end));
    }
    if (observation_years.empty()) {
        throw Error(ErrorKind::config, "observation_years must be non-empty");
    }
    for (std::size_t i = 1; i < observation_years.size(); ++i) {
        if (observation_years[i] <= observation_years[i - 1]) {
            throw Error(ErrorKind::config, "observation_years must be strictly increasing");
        }
    }
    if (observation_years.front() < window_end) {
        throw Error(ErrorKind::config,
                    fmt::format("first observation year {} precedes window_end {}",
                                observation_years.front(), window_end));
    }
}

std::size_t Corpus::year_index(int observation_year) const {
    for (std::size_t i = 0; i < observation_years.size(); ++i) {
        if (observation_years[i] == observation_year) return i;
    }
    throw Error(ErrorKind::internal,
                fmt::format("observation year {} not in corpus", observation_year));
}

const Researcher* Corpus::find_researcher(std::string_view id) const {
    auto it = std::lower_bound(researchers.begin(), researchers.end(), id,
                               [](const Researcher& r, std::string_view v) {
                                   return r.researcher_id < v;
                               });
    if (it != researchers.end() && it->researcher_id == id) return &*it;
    return nullptr;
}

const Publication* Corpus::find_publication(std::string_view id) const {
    auto it = std::lower_bound(publications.begin(), publications.end(), id,
                               [](const Publication& p, std::string_view v) {
                                   return p.pub_id < v;
                               });
    if (it != publications.end() && it->pub_id == id) return &*it;
    return nullptr;
}

std::map<std::string, std::vector<std::size_t>> Corpus::researchers_by_sds() const {
    std::map<std::string, std::vector<std::size_t>> out;
    for (std::size_t i = 0; i < researchers.size(); ++i) {
        out[researchers[i].sds_code].push_back(i);
    }
    return out;
}

std::map<std::string, std::string> Corpus::sds_uda_map() const {
    std::map<std::string, std::string> out;
    for (const auto& r : researchers) out[r.sds_code] = r.uda_code;
    return out;
}

std::vector<SdsCount> tally_by_sds(const Corpus& corpus) {
    std::map<std::string, SdsCount> by_sds;
    std::unordered_map<std::string, std::string> researcher_sds;
    for (const auto& r : corpus.researchers) {
        auto& c = by_sds[r.sds_code];
        c.sds_code = r.sds_code;
        c.uda_code = r.uda_code;
        ++c.members;
        researcher_sds.emplace(r.researcher_id, r.sds_code);
    }
    std::unordered_set<std::string> publishing;
    for (const auto& p : corpus.publications) {
        std::set<std::string> sds_hit;
        for (const auto& a : p.author_ids) {
            publishing.insert(a);
            sds_hit.insert(researcher_sds.at(a));
        }
        for (const auto& s : sds_hit) ++by_sds.at(s).publications;
    }
    for (const auto& [id, sds] : researcher_sds) {
        if (publishing.count(id)) ++by_sds.at(sds).publishing_members;
    }
    std::vector<SdsCount> out;
    out.reserve(by_sds.size());
    for (auto& [_, c] : by_sds) out.push_back(std::move(c));
    return out;
}

std::vector<UdaCount> tally_by_uda(const Corpus& corpus) {
    std::map<std::string, UdaCount> by_uda;
    std::map<std::string, std::set<std::string>> sds_of;
    std::map<std::string, std::set<std::string>> univ_of;
    std::unordered_map<std::string, std::string> researcher_uda;
    for (const auto& r : corpus.researchers) {
        auto& c = by_uda[r.uda_code];
        c.uda_code = r.uda_code;
        ++c.research_staff;
        sds_of[r.uda_code].insert(r.sds_code);
        univ_of[r.uda_code].insert(r.university_id);
        researcher_uda.emplace(r.researcher_id, r.uda_code);
    }
    for (const auto& p : corpus.publications) {
        std::set<std::string> uda_hit;
        for (const auto& a : p.author_ids) uda_hit.insert(researcher_uda.at(a));
        for (const auto& u : uda_hit) ++by_uda.at(u).publications;
    }
    std::vector<UdaCount> out;
    out.reserve(by_uda.size());
    for (auto& [code, c] : by_uda) {
        c.sds = static_cast<int>(sds_of[code].size());
        c.universities = static_cast<int>(univ_of[code].size());
        out.push_back(std::move(c));
    }
    return out;
}

LoadResult build_corpus(std::vector<Researcher> researchers,
                        std::vector<Publication> publications,
                        std::vector<CitationRow> citation_rows,
                        const CorpusConfig& config,
                        const std::string& researchers_src,
                        const std::string& publications_src,
                        const std::string& citations_src,
                        const std::map<std::string, std::size_t>& pub_lines) {
    config.validate();
    const auto ploc = [&](const Publication& p) {
        auto it = pub_lines.find(p.pub_id);
        return it == pub_lines.end() ? publications_src : at(publications_src, it->second);
    };

    std::sort(researchers.begin(), researchers.end(),
              [](const Researcher& a, const Researcher& b) {
                  return a.researcher_id < b.researcher_id;
              });
    for (std::size_t i = 1; i < researchers.size(); ++i) {
        if (researchers[i].researcher_id == researchers[i - 1].researcher_id) {
            throw Error(ErrorKind::schema,
                        fmt::format("{}: researcher_id: duplicate id '{}'", researchers_src,
                                    researchers[i].researcher_id));
        }
    }
    // Every SDS must map to exactly one UDA corpus-wide.
    {
        std::unordered_map<std::string, std::string> sds_uda;
        for (const auto& r : researchers) {
            auto [it, inserted] = sds_uda.emplace(r.sds_code, r.uda_code);
            if (!inserted && it->second != r.uda_code) {
                throw Error(ErrorKind::schema,
                            fmt::format("{}: uda_code: SDS '{}' mapped to both '{}' and '{}'",
                                        researchers_src, r.sds_code, it->second, r.uda_code));
            }
        }
    }

    std::sort(publications.begin(), publications.end(),
              [](const Publication& a, const Publication& b) { return a.pub_id < b.pub_id; });
    for (std::size_t i = 1; i < publications.size(); ++i) {
        if (publications[i].pub_id == publications[i - 1].pub_id) {
            throw Error(ErrorKind::schema,
                        fmt::format("{}: pub_id: duplicate id '{}'", publications_src,
                                    publications[i].pub_id));
        }
    }

    std::unordered_set<std::string> researcher_ids;
    researcher_ids.reserve(researchers.size());
    for (const auto& r : researchers) researcher_ids.insert(r.researcher_id);

    for (const auto& p : publications) {
        if (p.pub_year < config.window_start || p.pub_year > config.window_end) {
            throw Error(ErrorKind::schema,
                        fmt::format("{}: pub_year: {} outside window {}:{} for pub '{}'",
                                    ploc(p), p.pub_year, config.window_start,
                                    config.window_end, p.pub_id));
        }
        if (p.author_ids.empty()) {
            throw Error(ErrorKind::schema,
                        fmt::format("{}: author_ids: empty for pub '{}'", ploc(p), p.pub_id));
        }
        std::unordered_set<std::string> seen;
        for (const auto& a : p.author_ids) {
            if (!researcher_ids.count(a)) {
                throw Error(ErrorKind::referential,
                            fmt::format("{}: author_ids: unknown researcher '{}' on pub '{}'",
                                        ploc(p), a, p.pub_id));
            }
            if (!seen.insert(a).second) {
                throw Error(ErrorKind::schema,
                            fmt::format("{}: author_ids: duplicate author '{}' on pub '{}'",
                                        ploc(p), a, p.pub_id));
            }
        }
        if (p.categories.empty()) {
            throw Error(ErrorKind::schema,
                        fmt::format("{}: categories: empty for pub '{}'", ploc(p), p.pub_id));
        }
        std::unordered_set<std::string> cats;
        double weight_sum = 0.0;
        for (const auto& cw : p.categories) {
            if (!cats.insert(cw.category).second) {
                throw Error(ErrorKind::schema,
                            fmt::format("{}: categories: duplicate category '{}' on pub '{}'",
                                        ploc(p), cw.category, p.pub_id));
            }
            if (!(cw.weight > 0.0)) {
                throw Error(ErrorKind::schema,
                            fmt::format("{}: categories: non-positive weight {} on pub '{}'",
                                        ploc(p), cw.weight, p.pub_id));
            }
            weight_sum += cw.weight;
        }
        if (std::abs(weight_sum - 1.0) > 1e-9) {
            throw Error(ErrorKind::schema,
                        fmt::format("{}: categories: weights sum to {} (expected 1) on pub '{}'",
                                    ploc(p), weight_sum, p.pub_id));
        }
    }

    std::unordered_map<std::string, std::size_t> pub_index;
    pub_index.reserve(publications.size());
    for (std::size_t i = 0; i < publications.size(); ++i) {
        pub_index.emplace(publications[i].pub_id, i);
    }

    // Per-publication citation path over every year present in the input.
    std::vector<std::map<int, std::pair<std::int64_t, std::size_t>>> paths(publications.size());
    for (const auto& row : citation_rows) {
        auto it = pub_index.find(row.pub_id);
        if (it == pub_index.end()) {
            throw Error(ErrorKind::referential,
                        fmt::format("{}: pub_id: citation row for unknown pub '{}'",
                                    at(citations_src, row.line), row.pub_id));
        }
        const Publication& pub = publications[it->second];
        if (row.observation_year < pub.pub_year) {
            throw Error(ErrorKind::schema,
                        fmt::format("{}: observation_year: {} precedes pub_year {} for pub '{}'",
                                    at(citations_src, row.line), row.observation_year,
                                    pub.pub_year, row.pub_id));
        }
        auto [pit, inserted] = paths[it->second].emplace(
            row.observation_year, std::make_pair(row.cumulative_citations, row.line));
        if (!inserted) {
            throw Error(ErrorKind::schema,
                        fmt::format("{}: observation_year: duplicate citation row for pub "
                                    "'{}' year {}",
                                    at(citations_src, row.line), row.pub_id,
                                    row.observation_year));
        }
    }

    const std::size_t n_years = config.observation_years.size();
    LoadResult result;
    result.corpus.observation_years = config.observation_years;
    result.corpus.window_start = config.window_start;
    result.corpus.window_end = config.window_end;
    result.corpus.benchmark_year = config.benchmark_year();
    result.corpus.citations.assign(publications.size() * n_years, 0);

    for (std::size_t i = 0; i < publications.size(); ++i) {
        const auto& path = paths[i];
        std::int64_t prev = 0;
        int prev_year = 0;
        bool first = true;
        for (const auto& [year, entry] : path) {
            if (!first && entry.first < prev) {
                throw Error(
                    ErrorKind::monotonicity,
                    fmt::format("{}: cumulative_citations: pub '{}' decreases from {} at {} "
                                "to {} at {}",
                                at(citations_src, entry.second), publications[i].pub_id, prev,
                                prev_year, entry.first, year));
            }
            prev = entry.first;
            prev_year = year;
            first = false;
        }
        // Project onto the configured observation years; absent years
        // default to 0 and are flagged in the load report.
        prev = 0;
        prev_year = 0;
        first = true;
        for (std::size_t t = 0; t < n_years; ++t) {
            const int year = config.observation_years[t];
            std::int64_t value = 0;
            auto it = path.find(year);
            if (it != path.end()) {
                value = it->second.first;
            } else {
                ++result.report.n_defaulted;
                if (result.report.defaulted.size() < LoadReport::kMaxListedDefaults) {
                    result.report.defaulted.push_back({publications[i].pub_id, year});
                }
            }
            if (!first && value < prev) {
                throw Error(
                    ErrorKind::monotonicity,
                    fmt::format("{}: cumulative_citations: pub '{}' decreases from {} at {} to "
                                "{} at {} (missing rows default to 0)",
                                citations_src, publications[i].pub_id, prev, prev_year, value,
                                year));
            }
            result.corpus.citations[i * n_years + t] = value;
            prev = value;
            prev_year = year;
            first = false;
        }
    }

    result.corpus.researchers = std::move(researchers);
    result.corpus.publications = std::move(publications);

    result.report.n_researchers = static_cast<std::int64_t>(result.corpus.researchers.size());
    result.report.n_publications = static_cast<std::int64_t>(result.corpus.publications.size());
    result.report.n_citation_rows = static_cast<std::int64_t>(citation_rows.size());
    result.report.per_sds = tally_by_sds(result.corpus);
    result.report.per_uda = tally_by_uda(result.corpus);
    return result;
}

LoadResult load_corpus(const std::filesystem::path& researchers_path,
                       const std::filesystem::path& publications_path,
                       const std::filesystem::path& citations_path,
                       const CorpusConfig& config) {
    const std::string rsrc = researchers_path.string();
    const std::string psrc = publications_path.string();
    const std::string csrc = citations_path.string();

    std::vector<Researcher> researchers;
    {
        CsvReader reader(researchers_path);
        auto header = reader.next_row();
        if (!header) throw Error(ErrorKind::schema, fmt::format("{}: empty file", rsrc));
        expect_header(*header, {"researcher_id", "sds_code", "uda_code", "university_id"}, rsrc);
        while (auto row = reader.next_row()) {
            if (row->size() != 4) {
                throw Error(ErrorKind::schema,
                            fmt::format("{}:{}: expected 4 fields, got {}", rsrc,
                                        reader.row_line(), row->size()));
            }
            for (std::size_t f = 0; f < 3; ++f) {
                if ((*row)[f].empty()) {
                    static const char* names[] = {"researcher_id", "sds_code", "uda_code"};
                    throw Error(ErrorKind::schema, fmt::format("{}:{}: {}: empty value", rsrc,
                                                               reader.row_line(), names[f]));
                }
            }
            researchers.push_back({(*row)[0], (*row)[1], (*row)[2], (*row)[3]});
        }
    }

    std::vector<Publication> publications;
    std::map<std::string, std::size_t> pub_lines;
    {
        CsvReader reader(publications_path);
        auto header = reader.next_row();
        if (!header) throw Error(ErrorKind::schema, fmt::format("{}: empty file", psrc));
        expect_header(*header, {"pub_id", "pub_year", "author_ids", "categories"}, psrc);
        while (auto row = reader.next_row()) {
            const std::size_t line = reader.row_line();
            pub_lines.emplace((*row)[0], line);
            if (row->size() != 4) {
                throw Error(ErrorKind::schema, fmt::format("{}:{}: expected 4 fields, got {}",
                                                           psrc, line, row->size()));
            }
            Publication pub;
            pub.pub_id = (*row)[0];
            if (pub.pub_id.empty()) {
                throw Error(ErrorKind::schema,
                            fmt::format("{}:{}: pub_id: empty value", psrc, line));
            }
            pub.pub_year = parse_int((*row)[1], psrc, line, "pub_year");
            for (auto& a : split((*row)[2], ';')) {
                if (a.empty()) {
                    throw Error(ErrorKind::schema,
                                fmt::format("{}:{}: author_ids: empty author id", psrc, line));
                }
                pub.author_ids.push_back(std::move(a));
            }
            // Category entries are either all bare names (equal split) or
            // all name:weight pairs.
            auto entries = split((*row)[3], ';');
            int with_weight = 0;
            for (const auto& e : entries) {
                if (e.empty()) {
                    throw Error(ErrorKind::schema,
                                fmt::format("{}:{}: categories: empty entry", psrc, line));
                }
                if (e.find(':') != std::string::npos) ++with_weight;
            }
            if (with_weight != 0 && with_weight != static_cast<int>(entries.size())) {
                throw Error(ErrorKind::schema,
                            fmt::format("{}:{}: categories: mixed weighted and unweighted "
                                        "entries",
                                        psrc, line));
            }
            for (const auto& e : entries) {
                auto colon = e.find(':');
                if (colon == std::string::npos) {
                    pub.categories.push_back({e, 1.0 / static_cast<double>(entries.size())});
                } else {
                    pub.categories.push_back(
                        {e.substr(0, colon), parse_weight(e.substr(colon + 1), psrc, line)});
                }
            }
            publications.push_back(std::move(pub));
        }
    }

    std::vector<CitationRow> citation_rows;
    {
        CsvReader reader(citations_path);
        auto header = reader.next_row();
        if (!header) throw Error(ErrorKind::schema, fmt::format("{}: empty file", csrc));
        expect_header(*header, {"pub_id", "observation_year", "cumulative_citations"}, csrc);
        while (auto row = reader.next_row()) {
            const std::size_t line = reader.row_line();
            if (row->size() != 3) {
                throw Error(ErrorKind::schema, fmt::format("{}:{}: expected 3 fields, got {}",
                                                           csrc, line, row->size()));
            }
            CitationRow r;
            r.pub_id = (*row)[0];
            r.observation_year = parse_int((*row)[1], csrc, line, "observation_year");
            r.cumulative_citations = parse_count((*row)[2], csrc, line, "cumulative_citations");
            r.line = line;
            citation_rows.push_back(std::move(r));
        }
    }

    return build_corpus(std::move(researchers), std::move(publications),
                        std::move(citation_rows), config, rsrc, psrc, csrc,
                        pub_lines);
}

FilterResult filter_eligible_sds(const Corpus& corpus, double min_publishing_share,
                                 int min_members) {
    FilterResult result;
    std::set<std::string> kept;
    for (const auto& c : tally_by_sds(corpus)) {
        const double share =
            c.members > 0 ? static_cast<double>(c.publishing_members) / c.members : 0.0;
        const bool enough_members = c.members >= min_members;
        const bool enough_share = share >= min_publishing_share;
        if (enough_members && enough_share) {
            kept.insert(c.sds_code);
            result.report.kept.push_back(c.sds_code);
        } else {
            std::string reason;
            if (!enough_members) {
                reason = fmt::format("members {} < {}", c.members, min_members);
            }
            if (!enough_share) {
                if (!reason.empty()) reason += "; ";
                reason += fmt::format("publishing share {:.4f} < {:.4f}", share,
                                      min_publishing_share);
            }
            result.report.removed.push_back(
                {c.sds_code, c.members, c.publishing_members, share, reason});
        }
    }

    Corpus& out = result.corpus;
    out.observation_years = corpus.observation_years;
    out.window_start = corpus.window_start;
    out.window_end = corpus.window_end;
    out.benchmark_year = corpus.benchmark_year;

    std::unordered_set<std::string> kept_researchers;
    for (const auto& r : corpus.researchers) {
        if (kept.count(r.sds_code)) {
            out.researchers.push_back(r);
            kept_researchers.insert(r.researcher_id);
        }
    }

    const std::size_t n_years = corpus.observation_years.size();
    for (std::size_t i = 0; i < corpus.publications.size(); ++i) {
        Publication pub = corpus.publications[i];
        std::erase_if(pub.author_ids,
                      [&](const std::string& a) { return !kept_researchers.count(a); });
        if (pub.author_ids.empty()) continue;
        for (std::size_t t = 0; t < n_years; ++t) {
            out.citations.push_back(corpus.citations_at(i, t));
        }
        out.publications.push_back(std::move(pub));
    }
    return result;
}

void write_corpus_csvs(const Corpus& corpus, const std::filesystem::path& researchers_path,
                       const std::filesystem::path& publications_path,
                       const std::filesystem::path& citations_path) {
    {
        CsvWriter w(researchers_path);
        w.write_row({"researcher_id", "sds_code", "uda_code", "university_id"});
        for (const auto& r : corpus.researchers) {
            w.write_row({r.researcher_id, r.sds_code, r.uda_code, r.university_id});
        }
    }
    {
        CsvWriter w(publications_path);
        w.write_row({"pub_id", "pub_year", "author_ids", "categories"});
        for (const auto& p : corpus.publications) {
            std::string authors;
            for (std::size_t i = 0; i < p.author_ids.size(); ++i) {
                if (i) authors += ';';
                authors += p.author_ids[i];
            }
            const double equal = 1.0 / static_cast<double>(p.categories.size());
            bool is_equal_split = true;
            for (const auto& cw : p.categories) {
                if (std::abs(cw.weight - equal) > 1e-12) {
                    is_equal_split = false;
                    break;
                }
            }
            std::string cats;
            for (std::size_t i = 0; i < p.categories.size(); ++i) {
                if (i) cats += ';';
                cats += p.categories[i].category;
                if (!is_equal_split) {
                    cats += ':';
                    cats += exact_double(p.categories[i].weight);
                }
            }
            w.write_row({p.pub_id, std::to_string(p.pub_year), authors, cats});
        }
    }
    {
        CsvWriter w(citations_path);
        w.write_row({"pub_id", "observation_year", "cumulative_citations"});
        const std::size_t n_years = corpus.observation_years.size();
        for (std::size_t i = 0; i < corpus.publications.size(); ++i) {
            for (std::size_t t = 0; t < n_years; ++t) {
                w.write_row({corpus.publications[i].pub_id,
                             std::to_string(corpus.observation_years[t]),
                             std::to_string(corpus.citations_at(i, t))});
            }
        }
    }
}

} // namespace citewin
