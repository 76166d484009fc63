#pragma once

#include <stdexcept>
#include <string>

namespace wassproj {

// Least-squares design matrix lost full column rank.
class SingularFitError : public std::runtime_error {
public:
    explicit SingularFitError(const std::string& what) : std::runtime_error(what) {}
};

// Active-set QP solver exceeded its iteration cap or met an inconsistent
// working set; carries the iteration count for diagnostics.
class QpSolverError : public std::runtime_error {
public:
    QpSolverError(const std::string& what, int iterations)
        : std::runtime_error(what), iterations_(iterations) {}
    int iterations() const noexcept { return iterations_; }

private:
    int iterations_ = 0;
};

// Malformed CSV input; line is 1-based, 0 when unknown.
class CsvParseError : public std::runtime_error {
public:
    CsvParseError(const std::string& what, std::size_t line)
        : std::runtime_error(what + " (line " + std::to_string(line) + ")"), line_(line) {}
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_ = 0;
};

}  // namespace wassproj
