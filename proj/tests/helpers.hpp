#pragma once

#include "citewin/corpus.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <unistd.h>

namespace citewin::test {

inline Researcher R(std::string id, std::string sds, std::string uda,
                    std::string uni = "UNIV1") {
    return {std::move(id), std::move(sds), std::move(uda), std::move(uni)};
}

inline Publication P(std::string id, int year, std::vector<std::string> authors,
                     std::vector<CategoryWeight> cats) {
    Publication p;
    p.pub_id = std::move(id);
    p.pub_year = year;
    p.author_ids = std::move(authors);
    p.categories = std::move(cats);
    return p;
}

inline CitationRow C(std::string pub, int year, std::int64_t count) {
    return {std::move(pub), year, count, 0};
}

// n researchers R01..Rnn in one SDS, for ranking/stability fixtures.
inline std::vector<Researcher> one_sds(int n, const std::string& sds = "S1",
                                       const std::string& uda = "U1") {
    std::vector<Researcher> out;
    for (int i = 1; i <= n; ++i) {
        char id[8];
        std::snprintf(id, sizeof id, "R%02d", i);
        out.push_back(R(id, sds, uda));
    }
    return out;
}

inline std::string slurp(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    return std::string((std::istreambuf_iterator<char>(in)),
                       std::istreambuf_iterator<char>());
}

inline void spit(const std::filesystem::path& path, const std::string& text) {
    std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    out << text;
}

// Scratch directory unique per test-process run.
inline std::filesystem::path scratch_dir(const std::string& name) {
    const auto dir = std::filesystem::temp_directory_path() /
                     ("citewin_tests_" + std::to_string(::getpid())) / name;
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

// Path of the citewin CLI binary, exported by CTest; empty when run by hand.
inline std::string cli_path() {
    const char* p = std::getenv("CITEWIN_CLI");
    return p == nullptr ? std::string() : std::string(p);
}

} // namespace citewin::test
