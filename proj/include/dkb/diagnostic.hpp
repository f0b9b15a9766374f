#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace dkb {

struct SourceSpan {
    std::size_t line = 1;
    std::size_t column = 1;

    friend bool operator==(const SourceSpan &, const SourceSpan &) = default;
};

enum class Severity { Error, Warning };

struct Diagnostic {
    Severity severity = Severity::Error;
    std::string message;
    std::optional<SourceSpan> span;
};

std::string to_string(const Diagnostic &d);

bool has_errors(const std::vector<Diagnostic> &diagnostics);

// Raised by the parsers; carries every error found in the input, not just the first.
class ParseError : public std::runtime_error {
public:
    explicit ParseError(std::vector<Diagnostic> diagnostics);

    const std::vector<Diagnostic> &diagnostics() const { return diagnostics_; }

private:
    std::vector<Diagnostic> diagnostics_;
};

} // namespace dkb
