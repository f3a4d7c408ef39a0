#include "satis/diagnostics.hpp"

namespace satis {

std::string format_diagnostic(const ParseDiagnostic& d) {
    std::string out = d.severity == Severity::Error ? "error" : "warning";
    out += " [" + std::to_string(d.span.line) + ":" + std::to_string(d.span.column) + "] ";
    out += d.message;
    return out;
}

}  // namespace satis
