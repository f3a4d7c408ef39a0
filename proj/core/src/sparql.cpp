#include "satis/sparql.hpp"

#include <algorithm>
#include <cctype>
#include <set>

#include "satis/graph.hpp"
#include "satis/vocab.hpp"
#include "scan.hpp"

namespace satis {
namespace {

using detail::Scanner;

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    return s;
}

class QueryParser {
public:
    explicit QueryParser(const std::string& text) : scan_(text) {
        query_.namespaces["rdf"] = vocab::kRdfNs;
        query_.namespaces["rdfs"] = vocab::kRdfsNs;
    }

    QueryParseResult run() {
        while (!failed_) {
            scan_.skip_ws_and_comments();
            if (scan_.eof()) {
                error(scan_.span(), "expected select or construct query");
                break;
            }
            SourceSpan at = scan_.span();
            std::string kw = lower(scan_.read_local());
            if (kw == "prefix") {
                parse_prefix_decl();
            } else if (kw == "select") {
                parse_select();
                break;
            } else if (kw == "construct") {
                parse_construct();
                break;
            } else {
                error(at, "expected prefix, select or construct");
                break;
            }
        }
        if (!failed_) parse_trailer();
        if (!failed_) validate();
        if (failed_) return {std::nullopt, std::move(diags_)};
        return {std::move(query_), std::move(diags_)};
    }

private:
    void error(SourceSpan span, std::string message) {
        diags_.push_back({span, std::move(message), Severity::Error});
        failed_ = true;
    }

    void parse_prefix_decl() {
        scan_.skip_ws_and_comments();
        std::string pname = scan_.read_local();
        if (!scan_.match(':')) {
            error(scan_.span(), "expected prefix name followed by ':'");
            return;
        }
        scan_.skip_ws_and_comments();
        SourceSpan at = scan_.span();
        if (!scan_.match('<')) {
            error(at, "expected IRI reference in prefix declaration");
            return;
        }
        std::string iri;
        while (!scan_.eof() && scan_.peek() != '>') {
            char c = scan_.advance();
            if (std::isspace(static_cast<unsigned char>(c))) {
                error(at, "whitespace inside IRI reference");
                return;
            }
            iri += c;
        }
        if (!scan_.match('>') || iri.empty()) {
            error(at, "unterminated or empty IRI reference");
            return;
        }
        query_.namespaces[pname] = iri;
        scan_.skip_ws_and_comments();
        scan_.match('.');  // tolerated, not required
    }

    void parse_select() {
        query_.kind = QueryKind::Select;
        while (true) {
            scan_.skip_ws_and_comments();
            if (scan_.peek() == '?') {
                scan_.advance();
                std::string name = scan_.read_local();
                if (name.empty()) {
                    error(scan_.span(), "expected variable name after '?'");
                    return;
                }
                query_.projection.push_back({name});
            } else {
                break;
            }
        }
        if (query_.projection.empty()) {
            error(scan_.span(), "select requires at least one variable");
            return;
        }
        expect_keyword("where");
        if (failed_) return;
        query_.body = parse_group();
    }

    void parse_construct() {
        query_.kind = QueryKind::Construct;
        scan_.skip_ws_and_comments();
        SourceSpan at = scan_.span();
        if (!scan_.match('{')) {
            error(at, "expected '{' after construct");
            return;
        }
        while (!failed_) {
            scan_.skip_ws_and_comments();
            if (scan_.match('}')) break;
            if (scan_.eof()) {
                error(at, "unterminated construct template");
                return;
            }
            auto tp = parse_triple_pattern();
            if (!failed_) query_.construct_template.push_back(tp);
        }
        if (failed_) return;
        if (query_.construct_template.empty()) {
            error(at, "empty construct template");
            return;
        }
        expect_keyword("where");
        if (failed_) return;
        query_.body = parse_group();
    }

    void expect_keyword(const std::string& kw) {
        scan_.skip_ws_and_comments();
        SourceSpan at = scan_.span();
        std::string w = lower(scan_.read_local());
        if (w != kw) error(at, "expected '" + kw + "'");
    }

    GraphPattern parse_group() {
        GraphPattern gp;
        scan_.skip_ws_and_comments();
        SourceSpan at = scan_.span();
        if (!scan_.match('{')) {
            error(at, "expected '{'");
            return gp;
        }
        while (!failed_) {
            scan_.skip_ws_and_comments();
            if (scan_.match('}')) break;
            if (scan_.eof()) {
                error(at, "unterminated group");
                return gp;
            }
            if (std::isalpha(static_cast<unsigned char>(scan_.peek()))) {
                SourceSpan word_at = scan_.span();
                std::string w = scan_.read_local();
                if (scan_.peek() == ':') {
                    gp.patterns.push_back(parse_triple_pattern_from_qname(w, word_at));
                } else if (lower(w) == "filter") {
                    parse_filter(gp);
                } else {
                    error(word_at, "expected triple pattern or filter");
                }
            } else {
                gp.patterns.push_back(parse_triple_pattern());
            }
        }
        if (!failed_ && gp.patterns.empty())
            error(at, "empty where-block");
        return gp;
    }

    void parse_filter(GraphPattern& gp) {
        scan_.skip_ws_and_comments();
        SourceSpan at = scan_.span();
        if (!scan_.match('(')) {
            error(at, "expected '(' after filter");
            return;
        }
        scan_.skip_ws_and_comments();
        if (!scan_.match('?')) {
            error(scan_.span(), "expected variable in filter");
            return;
        }
        std::string var = scan_.read_local();
        scan_.skip_ws_and_comments();
        SourceSpan op_at = scan_.span();
        FilterOp op;
        if (scan_.match('=')) {
            op = scan_.match(':') ? FilterOp::TypeEq : FilterOp::Eq;
        } else if (scan_.match('<')) {
            if (!scan_.match('=') || !scan_.match(':')) {
                error(op_at, "unknown filter operator");
                return;
            }
            op = FilterOp::TypeSub;
        } else {
            error(op_at, "unknown filter operator");
            return;
        }
        scan_.skip_ws_and_comments();
        auto target = parse_pattern_term();
        if (failed_) return;
        if (is_var(target) || !as_term(target).is_iri()) {
            error(op_at, "filter target must be an IRI");
            return;
        }
        scan_.skip_ws_and_comments();
        if (!scan_.match(')')) {
            error(scan_.span(), "expected ')' to close filter");
            return;
        }
        gp.filters.push_back({{var}, op, as_term(target).value});
    }

    TriplePattern parse_triple_pattern() {
        PatternTerm s = parse_pattern_term();
        scan_.skip_ws_and_comments();
        PatternTerm p = failed_ ? PatternTerm{} : parse_pattern_term();
        scan_.skip_ws_and_comments();
        PatternTerm o = failed_ ? PatternTerm{} : parse_pattern_term();
        check_predicate(p);
        return {s, p, o};
    }

    TriplePattern parse_triple_pattern_from_qname(const std::string& pname, SourceSpan at) {
        PatternTerm s = finish_qname(pname, at);
        scan_.skip_ws_and_comments();
        PatternTerm p = failed_ ? PatternTerm{} : parse_pattern_term();
        scan_.skip_ws_and_comments();
        PatternTerm o = failed_ ? PatternTerm{} : parse_pattern_term();
        check_predicate(p);
        return {s, p, o};
    }

    void check_predicate(const PatternTerm& p) {
        if (failed_) return;
        if (!is_var(p) && !as_term(p).is_iri())
            error(scan_.span(), "pattern predicate must be an IRI or variable");
    }

    PatternTerm finish_qname(const std::string& pname, SourceSpan at) {
        scan_.match(':');
        std::string local = scan_.read_local();
        auto it = query_.namespaces.find(pname);
        if (it == query_.namespaces.end()) {
            error(at, "unknown prefix " + pname);
            return Term::iri("");
        }
        return Term::iri(it->second + local);
    }

    PatternTerm parse_pattern_term() {
        scan_.skip_ws_and_comments();
        SourceSpan at = scan_.span();
        char c = scan_.peek();
        if (c == '?') {
            scan_.advance();
            std::string name = scan_.read_local();
            if (name.empty()) {
                error(at, "expected variable name after '?'");
                return Term::iri("");
            }
            return Variable{name};
        }
        if (c == '<') {
            scan_.advance();
            std::string iri;
            while (!scan_.eof() && scan_.peek() != '>') {
                char ch = scan_.advance();
                if (std::isspace(static_cast<unsigned char>(ch))) {
                    error(at, "whitespace inside IRI reference");
                    return Term::iri("");
                }
                iri += ch;
            }
            if (!scan_.match('>') || iri.empty()) {
                error(at, "unterminated or empty IRI reference");
                return Term::iri("");
            }
            return Term::iri(iri);
        }
        if (c == '_' && scan_.peek2() == ':') {
            scan_.advance();
            scan_.advance();
            std::string label = scan_.read_local();
            if (label.empty()) {
                error(at, "expected blank node label after '_:'");
                return Term::iri("");
            }
            return Term::blank(label);
        }
        if (c == '"') {
            scan_.advance();
            std::string out;
            while (!scan_.eof() && scan_.peek() != '"') {
                char ch = scan_.advance();
                if (ch == '\\' && !scan_.eof()) {
                    char e = scan_.advance();
                    switch (e) {
                        case 'n': out += '\n'; break;
                        case 't': out += '\t'; break;
                        case 'r': out += '\r'; break;
                        case '"': out += '"'; break;
                        case '\\': out += '\\'; break;
                        default:
                            error(at, "unknown string escape");
                            return Term::iri("");
                    }
                } else {
                    out += ch;
                }
            }
            if (!scan_.match('"')) {
                error(at, "unterminated string literal");
                return Term::iri("");
            }
            return Term::literal(out);
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::string pname = scan_.read_local();
            if (scan_.peek() != ':') {
                error(at, "expected ':' after prefix name");
                return Term::iri("");
            }
            return finish_qname(pname, at);
        }
        error(at, "expected term");
        return Term::iri("");
    }

    void parse_trailer() {
        scan_.skip_ws_and_comments();
        if (scan_.eof()) return;
        SourceSpan at = scan_.span();
        std::string w = lower(scan_.read_local());
        if (w == "pragma") {
            scan_.skip_ws_and_comments();
            if (!scan_.match('{')) {
                error(scan_.span(), "expected '{' after pragma");
                return;
            }
            int depth = 1;
            while (!scan_.eof() && depth > 0) {
                char c = scan_.advance();
                if (c == '{') ++depth;
                if (c == '}') --depth;
            }
            if (depth != 0) {
                error(at, "unterminated pragma clause");
                return;
            }
            scan_.skip_ws_and_comments();
            if (!scan_.eof()) error(scan_.span(), "unexpected text after pragma");
        } else {
            error(at, "unexpected text after query");
        }
    }

    void validate() {
        std::set<std::string> bound;
        for (const auto& tp : query_.body.patterns)
            for (const auto* t : {&tp.s, &tp.p, &tp.o})
                if (is_var(*t)) bound.insert(as_var(*t).name);
        for (const auto& v : query_.projection) {
            if (!bound.count(v.name)) {
                error({1, 1}, "projected variable ?" + v.name + " is not bound in the where-block");
                return;
            }
        }
        for (const auto& f : query_.body.filters) {
            if (!bound.count(f.variable.name)) {
                error({1, 1}, "filter variable ?" + f.variable.name + " is not bound in the where-block");
                return;
            }
        }
    }

    Scanner scan_;
    Query query_;
    std::vector<ParseDiagnostic> diags_;
    bool failed_ = false;
};

std::string pattern_term_text(const PatternTerm& t,
                              const std::map<std::string, std::string>& ns) {
    if (is_var(t)) return "?" + as_var(t).name;
    const Term& term = as_term(t);
    if (term.is_iri()) return compact_iri(term.value, ns);
    return term.lexical();
}

void emit_group(std::string& out, const GraphPattern& gp,
                const std::map<std::string, std::string>& ns) {
    out += "{\n";
    for (const auto& tp : gp.patterns) {
        out += "    " + pattern_term_text(tp.s, ns) + " " + pattern_term_text(tp.p, ns) +
               " " + pattern_term_text(tp.o, ns) + "\n";
    }
    for (const auto& f : gp.filters) {
        out += "    filter(?" + f.variable.name + " " + filter_op_text(f.op) + " " +
               compact_iri(f.target_iri, ns) + ")\n";
    }
    out += "}\n";
}

}  // namespace

std::string filter_op_text(FilterOp op) {
    switch (op) {
        case FilterOp::Eq: return "=";
        case FilterOp::TypeEq: return "=:";
        case FilterOp::TypeSub: return "<=:";
    }
    return "=";
}

QueryParseResult parse_query(const std::string& text) {
    return QueryParser(text).run();
}

std::string serialize_query(const Query& q) {
    std::string out;
    for (const auto& [prefix, iri] : q.namespaces)
        out += "prefix " + prefix + ": <" + iri + ">\n";
    if (q.kind == QueryKind::Select) {
        out += "select";
        for (const auto& v : q.projection) out += " ?" + v.name;
        out += "\nwhere\n";
        emit_group(out, q.body, q.namespaces);
    } else {
        out += "construct\n{\n";
        for (const auto& tp : q.construct_template) {
            out += "    " + pattern_term_text(tp.s, q.namespaces) + " " +
                   pattern_term_text(tp.p, q.namespaces) + " " +
                   pattern_term_text(tp.o, q.namespaces) + "\n";
        }
        out += "}\nwhere\n";
        emit_group(out, q.body, q.namespaces);
    }
    return out;
}

}  // namespace satis
