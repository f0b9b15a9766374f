#include "dkb/diagnostic.hpp"

#include <algorithm>

namespace dkb {

std::string to_string(const Diagnostic &d) {
    std::string out;
    if (d.span) {
        out += std::to_string(d.span->line) + ":" + std::to_string(d.span->column) + ": ";
    }
    out += d.severity == Severity::Error ? "error: " : "warning: ";
    out += d.message;
    return out;
}

bool has_errors(const std::vector<Diagnostic> &diagnostics) {
    return std::any_of(diagnostics.begin(), diagnostics.end(),
                       [](const Diagnostic &d) { return d.severity == Severity::Error; });
}

static std::string summarize(const std::vector<Diagnostic> &diagnostics) {
    for (const auto &d : diagnostics) {
        if (d.severity == Severity::Error) {
            return to_string(d);
        }
    }
    return diagnostics.empty() ? "parse error" : to_string(diagnostics.front());
}

ParseError::ParseError(std::vector<Diagnostic> diagnostics)
    : std::runtime_error(summarize(diagnostics)), diagnostics_(std::move(diagnostics)) {}

} // namespace dkb
