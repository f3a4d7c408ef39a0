#pragma once
// Conjunctive graph pattern evaluation over a sealed graph, with the
// subsumption-aware type filters. Semantics are fixed by result-set
// equality with a brute-force assignment enumerator.

#include <map>
#include <vector>

#include "satis/graph.hpp"
#include "satis/hierarchy.hpp"
#include "satis/sparql.hpp"

namespace satis {

struct Binding {
    std::map<Variable, Term> terms;
    friend auto operator<=>(const Binding&, const Binding&) = default;
};

// Natural join of the triple patterns, then filters, deduplicated and in
// deterministic (lexicographic) order.
std::vector<Binding> eval_pattern(const Graph& g, const ClassHierarchy& h,
                                  const GraphPattern& gp);

// Eq: bound term equals the target IRI exactly. TypeEq: some asserted type
// of the bound resource equals the target. TypeSub: some asserted type is a
// (transitive, reflexive) subclass of the target.
bool eval_filter(const Binding& b, const FilterConstraint& f, const Graph& g,
                 const ClassHierarchy& h);

// Distinct projected rows, sorted lexicographically.
std::vector<std::vector<Term>> eval_select(const Graph& g, const ClassHierarchy& h,
                                           const Query& q);

}  // namespace satis
