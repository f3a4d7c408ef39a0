#pragma once
// RDF-style terms and triples, the substrate every store and pattern is
// built from.

#include <compare>
#include <string>

namespace satis {

// Kind values are ordered so that (kind, value) comparison coincides with
// lexicographic order of the serialized forms: "lit" < <iri> < _:blank.
enum class TermKind { Literal = 0, Iri = 1, Blank = 2 };

struct Term {
    TermKind kind = TermKind::Iri;
    std::string value;

    static Term iri(std::string v) { return {TermKind::Iri, std::move(v)}; }
    static Term blank(std::string v) { return {TermKind::Blank, std::move(v)}; }
    static Term literal(std::string v) { return {TermKind::Literal, std::move(v)}; }

    bool is_iri() const { return kind == TermKind::Iri; }
    bool is_blank() const { return kind == TermKind::Blank; }
    bool is_literal() const { return kind == TermKind::Literal; }

    // Serialized form: <iri>, _:label or "text" (with string escapes).
    std::string lexical() const;

    friend auto operator<=>(const Term&, const Term&) = default;
};

struct Triple {
    Term s, p, o;

    // A triple is storable when the subject is a resource and the
    // predicate is an IRI.
    bool valid() const {
        return !s.is_literal() && p.is_iri();
    }

    friend auto operator<=>(const Triple&, const Triple&) = default;
};

std::string escape_string(const std::string& raw);

}  // namespace satis
