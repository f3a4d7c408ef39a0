#pragma once
// In-memory triple store with set semantics and deterministic iteration.
// Mutable during load, immutable (and freely shareable) after seal().

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "satis/term.hpp"

namespace satis {

class Graph {
public:
    Graph();  // pre-declares the rdf: and rdfs: prefixes

    // Throws std::invalid_argument on a malformed triple and
    // std::logic_error when the graph is sealed. Re-insertion is a no-op.
    void insert(const Triple& t);

    bool contains(const Triple& t) const { return triples_.count(t) > 0; }
    std::size_t size() const { return triples_.size(); }
    bool empty() const { return triples_.empty(); }

    // Triple lookup; std::nullopt is a wildcard. Results come back in
    // (s, p, o) lexicographic order.
    std::vector<Triple> match(const std::optional<Term>& s,
                              const std::optional<Term>& p,
                              const std::optional<Term>& o) const;

    // Asserted rdf:type IRIs of a resource.
    std::set<std::string> types_of(const Term& r) const;

    void add_namespace(const std::string& prefix, const std::string& iri);
    const std::map<std::string, std::string>& namespaces() const { return namespaces_; }

    // Copies all triples and namespaces of `other` into this graph.
    void merge(const Graph& other);

    void seal() { sealed_ = true; }
    bool sealed() const { return sealed_; }

    const std::set<Triple>& triples() const { return triples_; }

private:
    std::set<Triple> triples_;
    std::map<std::string, std::string> namespaces_;
    bool sealed_ = false;
};

// Compacts an IRI to prefix:local when a declared namespace covers it and
// the remainder is a plain local name; otherwise returns <iri>.
std::string compact_iri(const std::string& iri,
                        const std::map<std::string, std::string>& namespaces);

}  // namespace satis
