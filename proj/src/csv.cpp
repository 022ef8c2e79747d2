#include "citewin/csv.hpp"

#include "citewin/errors.hpp"

#include <fmt/core.h>

#include <cstdio>

namespace citewin {

CsvReader::CsvReader(const std::filesystem::path& path) : path_(path.string()) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error(ErrorKind::config, fmt::format("cannot open file: {}", path_));
    }
    data_.assign(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

std::optional<std::vector<std::string>> CsvReader::next_row() {
    // Skip blank lines (including the trailing newline of the last record).
    while (pos_ < data_.size() && (data_[pos_] == '\n' || data_[pos_] == '\r')) {
        if (data_[pos_] == '\n') ++line_;
        ++pos_;
    }
    if (pos_ >= data_.size()) return std::nullopt;

    row_line_ = line_;
    std::vector<std::string> fields;
    std::string field;
    bool quoted = false;

    while (pos_ < data_.size()) {
        char c = data_[pos_];
        if (quoted) {
            if (c == '"') {
                if (pos_ + 1 < data_.size() && data_[pos_ + 1] == '"') {
                    field.push_back('"');
                    pos_ += 2;
                } else {
                    quoted = false;
                    ++pos_;
                }
            } else {
                if (c == '\n') ++line_;
                field.push_back(c);
                ++pos_;
            }
            continue;
        }
        switch (c) {
        case '"':
            if (!field.empty()) {
                throw Error(ErrorKind::schema,
                            fmt::format("{}:{}: stray quote inside unquoted field", path_, line_));
            }
            quoted = true;
            ++pos_;
            break;
        case ',':
            fields.push_back(std::move(field));
            field.clear();
            ++pos_;
            break;
        case '\r':
            ++pos_;
            break;
        case '\n':
            ++line_;
            ++pos_;
            fields.push_back(std::move(field));
            return fields;
        default:
            field.push_back(c);
            ++pos_;
        }
    }
    if (quoted) {
        throw Error(ErrorKind::schema,
                    fmt::format("{}:{}: unterminated quoted field", path_, row_line_));
    }
    fields.push_back(std::move(field));
    return fields;
}

namespace {

bool needs_quoting(const std::string& s) {
    return s.find_first_of(",\"\n\r") != std::string::npos;
}

std::string quote(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += "\"\"";
        else out.push_back(c);
    }
    out.push_back('"');
    return out;
}

} // namespace

CsvWriter::CsvWriter(const std::filesystem::path& path)
    : out_(path, std::ios::binary), path_(path.string()) {
    if (!out_) {
        throw Error(ErrorKind::config, fmt::format("cannot open file for writing: {}", path_));
    }
}

void CsvWriter::write_row(const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i > 0) out_.put(',');
        if (needs_quoting(fields[i])) out_ << quote(fields[i]);
        else out_ << fields[i];
    }
    out_.put('\n');
    if (!out_) {
        throw Error(ErrorKind::config, fmt::format("write failed: {}", path_));
    }
}

std::string fixed6(double value) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6f", value);
    return buf;
}

std::string exact_double(double value) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", value);
    return buf;
}

} // namespace citewin
