#pragma once
// SPARQL-lite: queries housing generic service descriptions, and the
// CONSTRUCT form rules are written in.
//
//   query      := prefixDecl* (selectQ | constructQ) pragma?
//   prefixDecl := 'prefix' PNAME ':' IRIREF
//   selectQ    := 'select' VAR+ 'where' group
//   constructQ := 'construct' '{' tpl+ '}' 'where' group
//   group      := '{' (tpat | filt)* '}'
//   tpat/tpl   := term term term
//   term       := qname | IRIREF | BLANK | VAR | STRING
//   filt       := 'filter' '(' VAR OP (qname | IRIREF) ')'
//   OP         := '=' | '=:' | '<=:'
//   pragma     := 'pragma' '{' ... balanced ... '}'   (consumed, discarded)
//
// Keywords are case-insensitive. Blank labels in queries are kept verbatim.

#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "satis/diagnostics.hpp"
#include "satis/term.hpp"

namespace satis {

struct Variable {
    std::string name;  // without the '?' sigil
    friend auto operator<=>(const Variable&, const Variable&) = default;
};

using PatternTerm = std::variant<Term, Variable>;

inline bool is_var(const PatternTerm& t) { return std::holds_alternative<Variable>(t); }
inline const Variable& as_var(const PatternTerm& t) { return std::get<Variable>(t); }
inline const Term& as_term(const PatternTerm& t) { return std::get<Term>(t); }

struct TriplePattern {
    PatternTerm s, p, o;
    friend bool operator==(const TriplePattern&, const TriplePattern&) = default;
};

enum class FilterOp { Eq, TypeEq, TypeSub };  // surface: = , =: , <=:

struct FilterConstraint {
    Variable variable;
    FilterOp op = FilterOp::Eq;
    std::string target_iri;
    friend bool operator==(const FilterConstraint&, const FilterConstraint&) = default;
};

struct GraphPattern {
    std::vector<TriplePattern> patterns;
    std::vector<FilterConstraint> filters;
    friend bool operator==(const GraphPattern&, const GraphPattern&) = default;
};

enum class QueryKind { Select, Construct };

struct Query {
    QueryKind kind = QueryKind::Select;
    std::vector<Variable> projection;                // Select only
    std::vector<TriplePattern> construct_template;   // Construct only
    GraphPattern body;
    std::map<std::string, std::string> namespaces;
    friend bool operator==(const Query&, const Query&) = default;
};

struct QueryParseResult {
    std::optional<Query> query;
    std::vector<ParseDiagnostic> diagnostics;
    bool ok() const { return query.has_value(); }
};

QueryParseResult parse_query(const std::string& text);

// Canonical emission: sorted prefix block, lowercase keywords, one pattern
// or filter per line. parse_query(serialize_query(q)) == q.
std::string serialize_query(const Query& q);

std::string filter_op_text(FilterOp op);

}  // namespace satis
