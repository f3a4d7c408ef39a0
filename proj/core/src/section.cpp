#include "satis/section.hpp"

#include "satis/graph.hpp"

namespace satis {

std::string to_string(const SectionPattern& sp,
                      const std::map<std::string, std::string>& namespaces) {
    auto slot = [&](const Slot& s) {
        if (!s) return std::string("*");
        if (namespaces.empty()) return *s;
        return compact_iri(*s, namespaces);
    };
    return "(" + slot(sp.source_verb) + " " + slot(sp.source_object) + " / " +
           slot(sp.strategy_param) + " -> " + slot(sp.target_verb) + " " +
           slot(sp.target_object) + ")";
}

}  // namespace satis
