#pragma once

#include <stdexcept>
#include <string>

namespace citewin {

// Broad failure categories; the CLI maps these onto exit codes
// (config/usage -> 2, everything else -> 1).
enum class ErrorKind {
    schema,        // malformed file: bad header, non-numeric field, bad weights
    referential,   // id references an unknown researcher/publication
    monotonicity,  // cumulative citation count decreases over time
    separation,    // probit contingency table has an empty cell
    degenerate,    // probit response or regressor takes a single value
    config,        // bad CLI/config input, missing file
    internal,      // invariant breach inside the pipeline
};

class Error : public std::runtime_error {
  public:
    Error(ErrorKind kind, std::string message)
        : std::runtime_error(std::move(message)), kind_(kind) {}

    ErrorKind kind() const { return kind_; }

  private:
    ErrorKind kind_;
};

} // namespace citewin
