#include "satis/query_eval.hpp"

#include <algorithm>
#include <set>

namespace satis {
namespace {

// Resolves a pattern position under a partial binding: a concrete term, or
// nullopt when the position is an unbound variable.
std::optional<Term> resolve(const PatternTerm& pt, const Binding& b) {
    if (!is_var(pt)) return as_term(pt);
    auto it = b.terms.find(as_var(pt));
    if (it != b.terms.end()) return it->second;
    return std::nullopt;
}

bool extend(Binding& b, const PatternTerm& pt, const Term& t) {
    if (!is_var(pt)) return as_term(pt) == t;
    auto [it, inserted] = b.terms.emplace(as_var(pt), t);
    return inserted || it->second == t;
}

}  // namespace

bool eval_filter(const Binding& b, const FilterConstraint& f, const Graph& g,
                 const ClassHierarchy& h) {
    auto it = b.terms.find(f.variable);
    if (it == b.terms.end()) return false;
    const Term& bound = it->second;
    switch (f.op) {
        case FilterOp::Eq:
            return bound.is_iri() && bound.value == f.target_iri;
        case FilterOp::TypeEq: {
            auto types = g.types_of(bound);
            return types.count(f.target_iri) > 0;
        }
        case FilterOp::TypeSub: {
            for (const auto& t : g.types_of(bound))
                if (h.is_subclass(t, f.target_iri)) return true;
            return false;
        }
    }
    return false;
}

std::vector<Binding> eval_pattern(const Graph& g, const ClassHierarchy& h,
                                  const GraphPattern& gp) {
    std::vector<Binding> bindings{Binding{}};
    for (const auto& tp : gp.patterns) {
        std::vector<Binding> next;
        for (const auto& b : bindings) {
            auto s = resolve(tp.s, b);
            auto p = resolve(tp.p, b);
            auto o = resolve(tp.o, b);
            for (const auto& t : g.match(s, p, o)) {
                Binding nb = b;
                if (extend(nb, tp.s, t.s) && extend(nb, tp.p, t.p) && extend(nb, tp.o, t.o))
                    next.push_back(std::move(nb));
            }
        }
        bindings = std::move(next);
    }
    std::set<Binding> out;
    for (const auto& b : bindings) {
        bool keep = true;
        for (const auto& f : gp.filters)
            if (!eval_filter(b, f, g, h)) {
                keep = false;
                break;
            }
        if (keep) out.insert(b);
    }
    return {out.begin(), out.end()};
}

std::vector<std::vector<Term>> eval_select(const Graph& g, const ClassHierarchy& h,
                                           const Query& q) {
    std::set<std::vector<Term>> rows;
    for (const auto& b : eval_pattern(g, h, q.body)) {
        std::vector<Term> row;
        row.reserve(q.projection.size());
        for (const auto& v : q.projection) row.push_back(b.terms.at(v));
        rows.insert(std::move(row));
    }
    return {rows.begin(), rows.end()};
}

}  // namespace satis
