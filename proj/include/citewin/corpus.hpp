#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace citewin {

struct Researcher {
    std::string researcher_id;
    std::string sds_code;
    std::string uda_code;
    std::string university_id;

    friend bool operator==(const Researcher&, const Researcher&) = default;
};

struct CategoryWeight {
    std::string category;
    double weight = 1.0;

    friend bool operator==(const CategoryWeight&, const CategoryWeight&) = default;
};

struct Publication {
    std::string pub_id;
    int pub_year = 0;
    std::vector<std::string> author_ids;      // unique, all known researchers
    std::vector<CategoryWeight> categories;   // weights > 0, sum to 1

    friend bool operator==(const Publication&, const Publication&) = default;
};

// Raw citations.csv row; the validated corpus stores a dense matrix instead.
struct CitationRow {
    std::string pub_id;
    int observation_year = 0;
    std::int64_t cumulative_citations = 0;
    std::size_t line = 0; // source line, 0 when constructed in memory
};

struct CorpusConfig {
    int window_start = 2001;
    int window_end = 2003;
    std::vector<int> observation_years = {2004, 2005, 2006, 2007, 2008};

    int benchmark_year() const { return observation_years.back(); }
    void validate() const; // throws Error(config)
};

// Immutable after construction. Researchers and publications are sorted by
// id; the citation matrix is laid out one row per publication, one column
// per observation year.
struct Corpus {
    std::vector<Researcher> researchers;
    std::vector<Publication> publications;
    std::vector<std::int64_t> citations; // publications.size() * observation_years.size()
    std::vector<int> observation_years;
    int window_start = 0;
    int window_end = 0;
    int benchmark_year = 0;

    std::size_t year_index(int observation_year) const; // throws Error(internal) if absent
    std::int64_t citations_at(std::size_t pub_index, std::size_t year_idx) const {
        return citations[pub_index * observation_years.size() + year_idx];
    }

    const Researcher* find_researcher(std::string_view id) const;
    const Publication* find_publication(std::string_view id) const;

    // sds -> indices into researchers, and sds -> uda. Both deterministic.
    std::map<std::string, std::vector<std::size_t>> researchers_by_sds() const;
    std::map<std::string, std::string> sds_uda_map() const;

    friend bool operator==(const Corpus&, const Corpus&) = default;
};

struct SdsCount {
    std::string sds_code;
    std::string uda_code;
    int members = 0;
    int publishing_members = 0;
    std::int64_t publications = 0; // pubs with >=1 author in the SDS
};

struct UdaCount {
    std::string uda_code;
    int research_staff = 0;
    std::int64_t publications = 0;
    int sds = 0;
    int universities = 0;
};

struct DefaultedCitation {
    std::string pub_id;
    int observation_year = 0;
};

struct LoadReport {
    std::int64_t n_researchers = 0;
    std::int64_t n_publications = 0;
    std::int64_t n_citation_rows = 0;
    std::vector<SdsCount> per_sds;
    std::vector<UdaCount> per_uda;
    std::int64_t n_defaulted = 0;
    std::vector<DefaultedCitation> defaulted; // capped at kMaxListedDefaults
    static constexpr std::size_t kMaxListedDefaults = 1000;
};

struct LoadResult {
    Corpus corpus;
    LoadReport report;
};

struct RemovedSds {
    std::string sds_code;
    int members = 0;
    int publishing_members = 0;
    double publishing_share = 0.0;
    std::string reason;
};

struct FilterReport {
    std::vector<RemovedSds> removed;
    std::vector<std::string> kept;
};

struct FilterResult {
    Corpus corpus;
    FilterReport report;
};

// Validating constructor shared by the CSV loader and the in-memory path
// (synthetic generation, tests). Rows may arrive in any order. pub_lines
// optionally maps pub_id -> 1-based source line for error messages.
LoadResult build_corpus(std::vector<Researcher> researchers,
                        std::vector<Publication> publications,
                        std::vector<CitationRow> citation_rows,
                        const CorpusConfig& config,
                        const std::string& researchers_src = "researchers",
                        const std::string& publications_src = "publications",
                        const std::string& citations_src = "citations",
                        const std::map<std::string, std::size_t>& pub_lines = {});

LoadResult load_corpus(const std::filesystem::path& researchers_path,
                       const std::filesystem::path& publications_path,
                       const std::filesystem::path& citations_path,
                       const CorpusConfig& config);

// Keeps only SDSs with publishing share >= min_publishing_share and at
// least min_members members (both inclusive). Publications lose removed
// authors; publications left with no retained author are dropped.
FilterResult filter_eligible_sds(const Corpus& corpus,
                                 double min_publishing_share = 0.5,
                                 int min_members = 10);

// Re-serializes a corpus to the three input CSV schemas. Citation rows are
// written for every observation year, so a reload reconstructs the corpus
// exactly.
void write_corpus_csvs(const Corpus& corpus,
                       const std::filesystem::path& researchers_path,
                       const std::filesystem::path& publications_path,
                       const std::filesystem::path& citations_path);

// Table-1-shaped per-UDA tallies (research staff, publications, SDSs,
// universities), recomputed from an arbitrary corpus.
std::vector<UdaCount> tally_by_uda(const Corpus& corpus);
std::vector<SdsCount> tally_by_sds(const Corpus& corpus);

} // namespace citewin
