#pragma once
// Reflexive-transitive rdfs:subClassOf closure. Drives the <=: filter and
// subsumption-aware head matching.

#include <map>
#include <set>
#include <string>

#include "satis/graph.hpp"

namespace satis {

class ClassHierarchy {
public:
    // True iff c2 is reachable from c1 through subclass edges, or c1 == c2.
    bool is_subclass(const std::string& c1, const std::string& c2) const;

    const std::set<std::string>& ancestors(const std::string& c) const;
    std::set<std::string> classes() const;

    void set_ancestors(const std::string& c, std::set<std::string> ancestors);

private:
    std::map<std::string, std::set<std::string>> ancestors_;  // includes self
};

// Builds the closure over every class mentioned in an rdfs:subClassOf triple
// or as an rdf:type object. Cycles collapse to mutual subsumption.
ClassHierarchy subclass_closure(const Graph& g);

}  // namespace satis
