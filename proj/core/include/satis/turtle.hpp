#pragma once
// Turtle-lite: the ontology and service annotation format.
//
//   doc        := (prefixDecl | stmt)*
//   prefixDecl := '@prefix' PNAME ':' IRIREF '.'
//   stmt       := subj pred obj (';' pred obj)* '.'
//   subj       := qname | IRIREF | BLANK
//   pred       := qname | IRIREF | 'a'          ('a' expands to rdf:type)
//   obj        := subj | STRING
//
// '#' starts a comment. rdf: and rdfs: are pre-declared. Blank node labels
// are freshened to document-scoped _:b1, _:b2, ...

#include <string>
#include <vector>

#include "satis/diagnostics.hpp"
#include "satis/graph.hpp"

namespace satis {

struct TurtleResult {
    Graph graph;
    std::vector<ParseDiagnostic> diagnostics;
    bool ok() const { return !has_errors(diagnostics); }
};

TurtleResult parse_turtle(const std::string& text);

// Canonical form: sorted prefix block, then one triple per line in
// lexicographic (s, p, o) order, IRIs compacted where a prefix applies.
std::string serialize_turtle(const Graph& g);

}  // namespace satis
