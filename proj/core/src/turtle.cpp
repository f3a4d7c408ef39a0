#include "satis/turtle.hpp"

#include <map>
#include <optional>

#include "satis/vocab.hpp"
#include "scan.hpp"

namespace satis {
namespace {

using detail::Scanner;

class TurtleParser {
public:
    explicit TurtleParser(const std::string& text) : scan_(text) {}

    TurtleResult run() {
        while (true) {
            scan_.skip_ws_and_comments();
            if (scan_.eof() || failed_) break;
            if (scan_.peek() == '@') {
                parse_prefix_decl();
            } else {
                parse_statement();
            }
        }
        return {std::move(graph_), std::move(diags_)};
    }

private:
    void error(SourceSpan span, std::string message) {
        diags_.push_back({span, std::move(message), Severity::Error});
        failed_ = true;  // stop at the first error; no value is produced
    }

    void parse_prefix_decl() {
        SourceSpan at = scan_.span();
        std::string kw;
        scan_.match('@');
        kw = scan_.read_local();
        if (kw != "prefix") {
            error(at, "expected @prefix directive");
            return;
        }
        scan_.skip_ws_and_comments();
        std::string pname = scan_.read_local();
        if (pname.empty() || !scan_.match(':')) {
            error(scan_.span(), "expected prefix name followed by ':'");
            return;
        }
        scan_.skip_ws_and_comments();
        auto iri = parse_iriref();
        if (!iri) return;
        scan_.skip_ws_and_comments();
        if (!scan_.match('.')) {
            error(scan_.span(), "expected '.' after @prefix declaration");
            return;
        }
        graph_.add_namespace(pname, *iri);
    }

    std::optional<std::string> parse_iriref() {
        SourceSpan at = scan_.span();
        if (!scan_.match('<')) {
            error(at, "expected IRI reference");
            return std::nullopt;
        }
        std::string iri;
        while (!scan_.eof() && scan_.peek() != '>') {
            char c = scan_.advance();
            if (c == '\n') {
                error(at, "unterminated IRI reference");
                return std::nullopt;
            }
            if (std::isspace(static_cast<unsigned char>(c))) {
                error(at, "whitespace inside IRI reference");
                return std::nullopt;
            }
            iri += c;
        }
        if (!scan_.match('>')) {
            error(at, "unterminated IRI reference");
            return std::nullopt;
        }
        if (iri.empty()) {
            error(at, "empty IRI reference");
            return std::nullopt;
        }
        return iri;
    }

    std::optional<std::string> parse_string() {
        SourceSpan at = scan_.span();
        scan_.match('"');
        std::string out;
        while (!scan_.eof() && scan_.peek() != '"') {
            char c = scan_.advance();
            if (c == '\\' && !scan_.eof()) {
                char e = scan_.advance();
                switch (e) {
                    case 'n': out += '\n'; break;
                    case 't': out += '\t'; break;
                    case 'r': out += '\r'; break;
                    case '"': out += '"'; break;
                    case '\\': out += '\\'; break;
                    default:
                        error(at, std::string("unknown string escape '\\") + e + "'");
                        return std::nullopt;
                }
            } else {
                out += c;
            }
        }
        if (!scan_.match('"')) {
            error(at, "unterminated string literal");
            return std::nullopt;
        }
        return out;
    }

    std::optional<Term> parse_resource() {
        SourceSpan at = scan_.span();
        char c = scan_.peek();
        if (c == '<') {
            auto iri = parse_iriref();
            if (!iri) return std::nullopt;
            return Term::iri(*iri);
        }
        if (c == '_' && scan_.peek2() == ':') {
            scan_.advance();
            scan_.advance();
            std::string label = scan_.read_local();
            if (label.empty()) {
                error(at, "expected blank node label after '_:'");
                return std::nullopt;
            }
            return Term::blank(fresh_blank(label));
        }
        // qname
        std::string pname = scan_.read_local();
        if (pname.empty() || !scan_.match(':')) {
            error(at, "expected IRI, qname or blank node");
            return std::nullopt;
        }
        std::string local = scan_.read_local();
        auto ns = graph_.namespaces().find(pname);
        if (ns == graph_.namespaces().end()) {
            error(at, "unknown prefix " + pname);
            return std::nullopt;
        }
        return Term::iri(ns->second + local);
    }

    std::optional<Term> parse_predicate() {
        SourceSpan at = scan_.span();
        // bare 'a' is rdf:type
        if (scan_.peek() == 'a' && !Scanner::is_local_char(scan_.peek2()) &&
            scan_.peek2() != ':') {
            scan_.advance();
            return Term::iri(vocab::kRdfType);
        }
        auto t = parse_resource();
        if (!t) return std::nullopt;
        if (!t->is_iri()) {
            error(at, "predicate must be an IRI");
            return std::nullopt;
        }
        return t;
    }

    std::optional<Term> parse_object() {
        if (scan_.peek() == '"') {
            auto s = parse_string();
            if (!s) return std::nullopt;
            return Term::literal(*s);
        }
        return parse_resource();
    }

    void parse_statement() {
        auto subj = parse_resource();
        if (!subj) return;
        while (true) {
            scan_.skip_ws_and_comments();
            auto pred = parse_predicate();
            if (!pred) return;
            scan_.skip_ws_and_comments();
            auto obj = parse_object();
            if (!obj) return;
            graph_.insert({*subj, *pred, *obj});
            scan_.skip_ws_and_comments();
            if (scan_.match(';')) continue;
            if (scan_.match('.')) return;
            error(scan_.span(), "expected ';' or '.' after triple");
            return;
        }
    }

    std::string fresh_blank(const std::string& label) {
        auto it = blank_map_.find(label);
        if (it != blank_map_.end()) return it->second;
        std::string fresh = "b" + std::to_string(++blank_counter_);
        blank_map_[label] = fresh;
        return fresh;
    }

    Scanner scan_;
    Graph graph_;
    std::vector<ParseDiagnostic> diags_;
    std::map<std::string, std::string> blank_map_;
    int blank_counter_ = 0;
    bool failed_ = false;
};

std::string term_text(const Term& t, const std::map<std::string, std::string>& ns) {
    if (t.is_iri()) return compact_iri(t.value, ns);
    return t.lexical();
}

}  // namespace

TurtleResult parse_turtle(const std::string& text) {
    return TurtleParser(text).run();
}

std::string serialize_turtle(const Graph& g) {
    std::string out;
    for (const auto& [prefix, iri] : g.namespaces())
        out += "@prefix " + prefix + ": <" + iri + "> .\n";
    if (!g.triples().empty()) out += "\n";
    for (const auto& t : g.triples()) {
        out += term_text(t.s, g.namespaces());
        out += " ";
        out += term_text(t.p, g.namespaces());
        out += " ";
        out += term_text(t.o, g.namespaces());
        out += " .\n";
    }
    return out;
}

}  // namespace satis
