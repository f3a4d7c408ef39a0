#include "satis/graph.hpp"

#include <cctype>
#include <stdexcept>

#include "satis/vocab.hpp"

namespace satis {

Graph::Graph() {
    namespaces_["rdf"] = vocab::kRdfNs;
    namespaces_["rdfs"] = vocab::kRdfsNs;
}

void Graph::insert(const Triple& t) {
    if (sealed_) throw std::logic_error("insert into sealed graph");
    if (t.s.is_literal())
        throw std::invalid_argument("triple subject must not be a literal");
    if (!t.p.is_iri())
        throw std::invalid_argument("triple predicate must be an IRI");
    triples_.insert(t);
}

void Graph::add_namespace(const std::string& prefix, const std::string& iri) {
    if (sealed_) throw std::logic_error("namespace added to sealed graph");
    namespaces_[prefix] = iri;
}

void Graph::merge(const Graph& other) {
    for (const auto& t : other.triples_) insert(t);
    for (const auto& [p, iri] : other.namespaces_) namespaces_[p] = iri;
}

std::vector<Triple> Graph::match(const std::optional<Term>& s,
                                 const std::optional<Term>& p,
                                 const std::optional<Term>& o) const {
    std::vector<Triple> out;
    auto take = [&](const Triple& t) {
        if (s && t.s != *s) return;
        if (p && t.p != *p) return;
        if (o && t.o != *o) return;
        out.push_back(t);
    };
    if (s) {
        // The set is ordered by (s, p, o), so a bound subject gives a range.
        Term lo_p = p.value_or(Term{TermKind::Literal, ""});
        auto it = triples_.lower_bound(Triple{*s, lo_p, Term{TermKind::Literal, ""}});
        for (; it != triples_.end() && it->s == *s; ++it) take(*it);
    } else {
        for (const auto& t : triples_) take(t);
    }
    return out;
}

std::set<std::string> Graph::types_of(const Term& r) const {
    std::set<std::string> out;
    for (const auto& t : match(r, Term::iri(vocab::kRdfType), std::nullopt))
        if (t.o.is_iri()) out.insert(t.o.value);
    return out;
}

std::string compact_iri(const std::string& iri,
                        const std::map<std::string, std::string>& namespaces) {
    auto local_ok = [](const std::string& l) {
        if (l.empty()) return false;
        if (!(std::isalpha(static_cast<unsigned char>(l[0])) || l[0] == '_')) return false;
        for (char c : l)
            if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-'))
                return false;
        return true;
    };
    const std::string* best_prefix = nullptr;
    std::size_t best_len = 0;
    for (const auto& [prefix, base] : namespaces) {
        if (base.size() <= best_len) continue;
        if (iri.size() <= base.size() || iri.compare(0, base.size(), base) != 0) continue;
        if (!local_ok(iri.substr(base.size()))) continue;
        best_prefix = &prefix;
        best_len = base.size();
    }
    if (best_prefix) return *best_prefix + ":" + iri.substr(best_len);
    return "<" + iri + ">";
}

}  // namespace satis
