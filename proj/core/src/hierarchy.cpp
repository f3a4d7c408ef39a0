#include "satis/hierarchy.hpp"

#include <deque>

#include "satis/vocab.hpp"

namespace satis {

bool ClassHierarchy::is_subclass(const std::string& c1, const std::string& c2) const {
    if (c1 == c2) return true;
    auto it = ancestors_.find(c1);
    return it != ancestors_.end() && it->second.count(c2) > 0;
}

const std::set<std::string>& ClassHierarchy::ancestors(const std::string& c) const {
    static const std::set<std::string> kEmpty;
    auto it = ancestors_.find(c);
    return it == ancestors_.end() ? kEmpty : it->second;
}

std::set<std::string> ClassHierarchy::classes() const {
    std::set<std::string> out;
    for (const auto& [c, _] : ancestors_) out.insert(c);
    return out;
}

void ClassHierarchy::set_ancestors(const std::string& c, std::set<std::string> ancestors) {
    ancestors_[c] = std::move(ancestors);
}

ClassHierarchy subclass_closure(const Graph& g) {
    std::map<std::string, std::set<std::string>> edges;  // child -> direct parents
    std::set<std::string> classes;

    const Term sub_class_of = Term::iri(vocab::kRdfsSubClassOf);
    const Term rdf_type = Term::iri(vocab::kRdfType);
    for (const auto& t : g.triples()) {
        if (t.p == sub_class_of && t.s.is_iri() && t.o.is_iri()) {
            edges[t.s.value].insert(t.o.value);
            classes.insert(t.s.value);
            classes.insert(t.o.value);
        } else if (t.p == rdf_type && t.o.is_iri()) {
            classes.insert(t.o.value);
        }
    }

    ClassHierarchy h;
    for (const auto& c : classes) {
        std::set<std::string> seen{c};
        std::deque<std::string> queue{c};
        while (!queue.empty()) {
            std::string cur = queue.front();
            queue.pop_front();
            auto it = edges.find(cur);
            if (it == edges.end()) continue;
            for (const auto& parent : it->second)
                if (seen.insert(parent).second) queue.push_back(parent);
        }
        h.set_ancestors(c, std::move(seen));
    }
    return h;
}

}  // namespace satis
