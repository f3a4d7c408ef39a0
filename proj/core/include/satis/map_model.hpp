#pragma once
// Intentional requirement maps: intentions as nodes, strategies as edges,
// sections as the unit of refinement and operationalisation.
//
// Map DSL grammar:
//   file    := prefixDecl* mapdoc*
//   prefixDecl := '@prefix' PNAME ':' IRIREF '.'
//   mapdoc  := 'map' STRING '{' decl* '}'
//   decl    := 'start' NAME | 'stop' NAME
//            | 'intention' NAME '{' 'verb' qname 'object' qname '}'
//            | 'section' NAME '{' 'from' NAME 'to' NAME 'strategy' STRING
//              ('manner' qname)? '}'
//            | 'refine' NAME 'with' 'map' STRING
//            | 'operationalise' NAME 'with' 'query' STRING
//
// The start intention is implicit and unqualified; the stop declaration
// names a declared intention, whose verb/object formalise the map's goal.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "satis/diagnostics.hpp"
#include "satis/graph.hpp"
#include "satis/section.hpp"

namespace satis {

struct Intention {
    std::string name;
    Slot verb;
    Slot object;
    friend bool operator==(const Intention&, const Intention&) = default;
};

struct Strategy {
    std::string label;
    Slot manner;  // stored and encoded, never matched on
    friend bool operator==(const Strategy&, const Strategy&) = default;
};

struct Section {
    std::string id;
    std::string source;  // intention name
    std::string target;  // intention name
    Strategy strategy;
    friend bool operator==(const Section&, const Section&) = default;
};

struct MapModel {
    std::string id;
    std::vector<Intention> intentions;  // declaration order; start stays implicit
    std::vector<Section> sections;      // declaration order
    std::string start;
    std::string stop;
    std::map<std::string, std::string> refinements;               // section -> map id
    std::map<std::string, std::vector<std::string>> attachments;  // section -> query refs
    std::map<std::string, std::string> namespaces;

    const Intention* find_intention(const std::string& name) const;
    const Section* find_section(const std::string& id) const;

    friend bool operator==(const MapModel&, const MapModel&) = default;
};

struct MapDocument {
    std::vector<MapModel> maps;
    friend bool operator==(const MapDocument&, const MapDocument&) = default;
};

struct MapParseResult {
    std::optional<MapDocument> doc;
    std::vector<ParseDiagnostic> diagnostics;
    bool ok() const { return doc.has_value(); }
};

MapParseResult parse_map_dsl(const std::string& text);
std::string serialize_map_dsl(const MapDocument& doc);

// Structural checks plus warnings for verbs/objects/manners absent from the
// domain ontology.
std::vector<ParseDiagnostic> validate(const MapModel& m, const Graph& domain);

struct Path {
    std::vector<Section> sections;
    friend bool operator==(const Path&, const Path&) = default;
};

struct PathEnumeration {
    std::vector<Path> paths;
    bool truncated = false;
};

// All simple (no repeated section) start-to-stop paths, depth-first with
// outgoing sections visited in id order.
PathEnumeration enumerate_paths(const MapModel& m, std::size_t max_paths = 64);

// Map-ontology encoding: one _:s/_:g blank pair per section, one intention
// blank per intention, wildcards as map:AnyVerb/AnyObject/AnyParameter.
Graph to_triples(const MapModel& m);

// Throws std::out_of_range on an unknown section id.
SectionPattern section_signature(const MapModel& m, const std::string& section_id);

}  // namespace satis
