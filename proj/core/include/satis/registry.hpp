#pragma once
// The community semantic memory: a directory of ontologies, service
// descriptions, maps, queries and rules, loaded into one sealed knowledge
// base.
//
// Layout under the root directory:
//   ontology/*.ttl   domain ontology (Turtle-lite)
//   services/*.ttl   OWL-S-lite service annotations
//   maps/*.map       intentional requirement maps (map DSL)
//   queries/*.rq     select queries referenced by `operationalise`
//   rules/*.rq       hand-written rules (CONSTRUCT form)

#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "satis/compiler.hpp"
#include "satis/diagnostics.hpp"
#include "satis/engine.hpp"
#include "satis/graph.hpp"
#include "satis/hierarchy.hpp"
#include "satis/map_model.hpp"
#include "satis/rule.hpp"

namespace satis {

struct Parameter {
    Term iri;                     // Iri or Blank
    std::set<std::string> types;  // non-empty for a valid parameter
    friend bool operator==(const Parameter&, const Parameter&) = default;
};

struct ServiceDescription {
    std::string iri;
    std::string label;      // may be empty
    std::string grounding;  // opaque URI, stored but never dereferenced
    std::vector<Parameter> inputs;
    std::vector<Parameter> outputs;
    friend bool operator==(const ServiceDescription&, const ServiceDescription&) = default;
};

struct KnowledgeBase {
    Graph graph;  // sealed after load
    ClassHierarchy hierarchy;
    std::vector<Rule> rules;  // unique ids, sorted
    std::vector<MapModel> maps;
    std::vector<ServiceDescription> services;
};

struct FragmentSummary {
    std::string rule_id;
    bool is_abstract = false;
    SectionPattern signature;
    std::string origin;  // file the rule came from
};

struct LoadResult {
    KnowledgeBase kb;
    std::vector<ParseDiagnostic> diagnostics;
    bool ok() const { return !has_errors(diagnostics); }
};

LoadResult load_memory(const std::filesystem::path& root);

// The OWL-S-lite triple encoding of a service description.
Graph service_to_triples(const ServiceDescription& sd);

// Recovers the service descriptions asserted in a graph.
std::vector<ServiceDescription> extract_services(const Graph& g);

// Summaries sorted by rule id; the optional (verb, object) filter keeps
// rules whose head matches that goal under the engine's matching semantics.
std::vector<FragmentSummary> list_fragments(
    const KnowledgeBase& kb,
    const std::optional<std::pair<std::string, std::string>>& verb_object = std::nullopt,
    const EngineConfig& cfg = {});

}  // namespace satis
