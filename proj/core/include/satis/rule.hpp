#pragma once
// Fragment rules: a section-shaped head plus either a service query body
// (concrete, operational guideline) or an ordered list of subgoal sections
// (abstract, intentional guideline).

#include <map>
#include <string>
#include <variant>
#include <vector>

#include "satis/section.hpp"
#include "satis/sparql.hpp"

namespace satis {

struct ConcreteBody {
    GraphPattern pattern;
    Variable service_var;  // must occur in pattern
    friend bool operator==(const ConcreteBody&, const ConcreteBody&) = default;
};

struct AbstractBody {
    std::vector<SectionPattern> subgoals;  // path order; concrete targets
    friend bool operator==(const AbstractBody&, const AbstractBody&) = default;
};

struct Rule {
    std::string id;
    SectionPattern head;
    std::variant<ConcreteBody, AbstractBody> body;
    std::map<std::string, std::string> namespaces;
    std::string origin;  // provenance (file path); set by the registry

    bool concrete() const { return std::holds_alternative<ConcreteBody>(body); }
    const ConcreteBody& as_concrete() const { return std::get<ConcreteBody>(body); }
    const AbstractBody& as_abstract() const { return std::get<AbstractBody>(body); }

    friend bool operator==(const Rule&, const Rule&) = default;
};

}  // namespace satis
