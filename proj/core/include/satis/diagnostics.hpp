#pragma once

#include <string>
#include <vector>

namespace satis {

struct SourceSpan {
    int line = 1;    // 1-based
    int column = 1;  // 1-based
    friend auto operator<=>(const SourceSpan&, const SourceSpan&) = default;
};

enum class Severity { Error, Warning };

struct ParseDiagnostic {
    SourceSpan span;
    std::string message;
    Severity severity = Severity::Error;
};

inline bool has_errors(const std::vector<ParseDiagnostic>& ds) {
    for (const auto& d : ds)
        if (d.severity == Severity::Error) return true;
    return false;
}

std::string format_diagnostic(const ParseDiagnostic& d);

}  // namespace satis
