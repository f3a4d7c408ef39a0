#include "satis/term.hpp"

namespace satis {

std::string escape_string(const std::string& raw) {
    std::string out;
    out.reserve(raw.size());
    for (char c : raw) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\t': out += "\\t"; break;
            case '\r': out += "\\r"; break;
            default: out += c;
        }
    }
    return out;
}

std::string Term::lexical() const {
    switch (kind) {
        case TermKind::Iri: return "<" + value + ">";
        case TermKind::Blank: return "_:" + value;
        case TermKind::Literal: return "\"" + escape_string(value) + "\"";
    }
    return {};
}

}  // namespace satis
