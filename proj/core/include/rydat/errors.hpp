#pragma once

#include <stdexcept>
#include <string>

namespace rydat {

/// Base of all toolkit errors. category() is a stable machine-readable tag
/// used by the CLI to pick exit codes.
class Error : public std::runtime_error {
public:
    Error(std::string category, const std::string& message)
        : std::runtime_error(message), category_(std::move(category)) {}

    const std::string& category() const noexcept { return category_; }

private:
    std::string category_;
};

/// Argument outside the mathematical domain of an operation.
struct DomainError : Error {
    explicit DomainError(const std::string& m) : Error("domain", m) {}
};

/// Missing or inconsistent configuration (species data, run config, grids).
struct ConfigError : Error {
    explicit ConfigError(const std::string& m) : Error("config", m) {}
};

/// Malformed input file; carries a 1-based line number when known.
struct ParseError : Error {
    ParseError(const std::string& m, long line = 0)
        : Error("parse", line > 0 ? m + " (line " + std::to_string(line) + ")" : m),
          line_number(line) {}
    long line_number;
};

/// Dipole selection rule violated (Δl != 1, ΔF > 1, projection mismatch...).
struct SelectionRuleError : Error {
    explicit SelectionRuleError(const std::string& m) : Error("selection-rule", m) {}
};

/// Requested entry absent from a loaded prediction table.
struct LookupError : Error {
    explicit LookupError(const std::string& m) : Error("lookup", m) {}
};

/// Numerical failure (divergence, non-convergence) with diagnostics.
struct NumericalError : Error {
    explicit NumericalError(const std::string& m) : Error("numerical", m) {}
};

/// Trace carries no detectable feature to fit.
struct NoSignalError : Error {
    explicit NoSignalError(const std::string& m) : Error("no-signal", m) {}
};

/// Too few or degenerate data points for the requested regression.
struct InsufficientDataError : Error {
    explicit InsufficientDataError(const std::string& m) : Error("insufficient-data", m) {}
};

/// Image feature below the noise floor.
struct InsufficientContrastError : Error {
    explicit InsufficientContrastError(const std::string& m)
        : Error("insufficient-contrast", m) {}
};

struct IoError : Error {
    explicit IoError(const std::string& m) : Error("io", m) {}
};

struct FileNotFoundError : Error {
    explicit FileNotFoundError(const std::string& path)
        : Error("file-not-found", "no such file: " + path) {}
};

} // namespace rydat
