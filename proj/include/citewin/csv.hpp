#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

namespace citewin {

// RFC-4180 style reader: comma-delimited, `"`-quoted fields that may contain
// commas, quotes ("" escape) and newlines. Blank lines are skipped.
class CsvReader {
  public:
    explicit CsvReader(const std::filesystem::path& path);

    // Next record, or nullopt at end of input.
    std::optional<std::vector<std::string>> next_row();

    // 1-based line number where the last returned record started.
    std::size_t row_line() const { return row_line_; }

    const std::string& path() const { return path_; }

  private:
    std::string path_;
    std::string data_;
    std::size_t pos_ = 0;
    std::size_t line_ = 1;
    std::size_t row_line_ = 0;
};

class CsvWriter {
  public:
    explicit CsvWriter(const std::filesystem::path& path);

    void write_row(const std::vector<std::string>& fields);

  private:
    std::ofstream out_;
    std::string path_;
};

// Fixed 6-decimal rendering used for every rational in report files.
std::string fixed6(double value);

// Exact round-trip rendering (%.17g) for values that must reload bit-identically.
std::string exact_double(double value);

} // namespace citewin
