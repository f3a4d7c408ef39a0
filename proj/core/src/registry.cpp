#include "satis/registry.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <sstream>

#include "satis/query_eval.hpp"
#include "satis/sparql.hpp"
#include "satis/turtle.hpp"
#include "satis/vocab.hpp"

namespace satis {
namespace {

namespace fs = std::filesystem;

std::vector<fs::path> sorted_files(const fs::path& dir, const std::string& extension) {
    std::vector<fs::path> out;
    if (!fs::is_directory(dir)) return out;
    for (const auto& entry : fs::directory_iterator(dir))
        if (entry.is_regular_file() && entry.path().extension() == extension)
            out.push_back(entry.path());
    std::sort(out.begin(), out.end());
    return out;
}

std::optional<std::string> read_file(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) return std::nullopt;
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

// Parsed files all restart blank labels at _:b1; prefixing with the file
// stem keeps blanks distinct when several files merge into one graph.
Graph relabel_blanks(const Graph& g, const fs::path& file) {
    std::string prefix = file.stem().string();
    for (auto& c : prefix)
        if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_' && c != '-') c = '_';
    prefix += "_";
    Graph out;
    for (const auto& [p, iri] : g.namespaces()) out.add_namespace(p, iri);
    auto rename = [&](const Term& t) {
        return t.is_blank() ? Term::blank(prefix + t.value) : t;
    };
    for (const auto& t : g.triples()) out.insert({rename(t.s), rename(t.p), rename(t.o)});
    return out;
}

void add_prefixed(std::vector<ParseDiagnostic>& sink, const fs::path& file,
                  const std::vector<ParseDiagnostic>& diags) {
    for (const auto& d : diags)
        sink.push_back({d.span, file.filename().string() + ": " + d.message, d.severity});
}

// `# @signature: sv so param tv to` comment on standalone queries; each
// token is '*', a qname (resolved against the query's prefixes) or <iri>.
std::optional<SectionPattern> parse_signature_comment(
    const std::string& text, const std::map<std::string, std::string>& ns,
    std::string& error) {
    std::istringstream lines(text);
    std::string line;
    while (std::getline(lines, line)) {
        std::size_t at = line.find("# @signature:");
        if (at == std::string::npos) continue;
        std::istringstream tokens(line.substr(at + std::string("# @signature:").size()));
        std::vector<Slot> slots;
        std::string tok;
        while (tokens >> tok) {
            if (tok == "*") {
                slots.push_back(std::nullopt);
            } else if (tok.front() == '<' && tok.back() == '>') {
                slots.push_back(tok.substr(1, tok.size() - 2));
            } else {
                std::size_t colon = tok.find(':');
                if (colon == std::string::npos) {
                    error = "bad @signature token '" + tok + "'";
                    return std::nullopt;
                }
                auto it = ns.find(tok.substr(0, colon));
                if (it == ns.end()) {
                    error = "unknown prefix in @signature token '" + tok + "'";
                    return std::nullopt;
                }
                slots.push_back(it->second + tok.substr(colon + 1));
            }
        }
        if (slots.size() != 5) {
            error = "@signature needs five slots (source verb/object, parameter, "
                    "target verb/object)";
            return std::nullopt;
        }
        return SectionPattern{slots[0], slots[1], slots[2], slots[3], slots[4]};
    }
    return std::nullopt;
}

std::optional<std::string> id_override(const std::string& text) {
    std::istringstream lines(text);
    std::string line;
    while (std::getline(lines, line)) {
        std::size_t at = line.find("# @id:");
        if (at == std::string::npos) continue;
        std::string rest = line.substr(at + std::string("# @id:").size());
        std::size_t b = rest.find_first_not_of(" \t");
        std::size_t e = rest.find_last_not_of(" \t\r");
        if (b == std::string::npos) return std::nullopt;
        return rest.substr(b, e - b + 1);
    }
    return std::nullopt;
}

}  // namespace

Graph service_to_triples(const ServiceDescription& sd) {
    Graph g;
    Term svc = Term::iri(sd.iri);
    auto emit_param = [&](const std::string& pred, const Parameter& p) {
        g.insert({svc, Term::iri(pred), p.iri});
        for (const auto& t : p.types)
            g.insert({p.iri, Term::iri(vocab::kRdfType), Term::iri(t)});
    };
    for (const auto& p : sd.inputs) emit_param(vocab::kHasInput, p);
    for (const auto& p : sd.outputs) emit_param(vocab::kHasOutput, p);
    if (!sd.grounding.empty())
        g.insert({svc, Term::iri(vocab::kGrounding), Term::literal(sd.grounding)});
    if (!sd.label.empty())
        g.insert({svc, Term::iri(vocab::kRdfsLabel), Term::literal(sd.label)});
    return g;
}

std::vector<ServiceDescription> extract_services(const Graph& g) {
    std::set<std::string> subjects;
    const Term has_input = Term::iri(vocab::kHasInput);
    const Term has_output = Term::iri(vocab::kHasOutput);
    for (const auto& t : g.triples())
        if ((t.p == has_input || t.p == has_output) && t.s.is_iri())
            subjects.insert(t.s.value);

    std::vector<ServiceDescription> out;
    for (const auto& s : subjects) {
        ServiceDescription sd;
        sd.iri = s;
        Term svc = Term::iri(s);
        for (const auto& t : g.match(svc, has_input, std::nullopt))
            sd.inputs.push_back({t.o, g.types_of(t.o)});
        for (const auto& t : g.match(svc, has_output, std::nullopt))
            sd.outputs.push_back({t.o, g.types_of(t.o)});
        for (const auto& t : g.match(svc, Term::iri(vocab::kGrounding), std::nullopt))
            if (t.o.is_literal() && sd.grounding.empty()) sd.grounding = t.o.value;
        for (const auto& t : g.match(svc, Term::iri(vocab::kRdfsLabel), std::nullopt))
            if (t.o.is_literal() && sd.label.empty()) sd.label = t.o.value;
        out.push_back(std::move(sd));
    }
    return out;
}

LoadResult load_memory(const fs::path& root) {
    LoadResult result;
    auto& diags = result.diagnostics;
    auto& kb = result.kb;

    if (!fs::is_directory(root)) {
        diags.push_back({{1, 1}, "memory root " + root.string() + " is not a directory",
                         Severity::Error});
        return result;
    }

    Graph ontology;

    // Ontology and service annotations.
    for (const auto& file : sorted_files(root / "ontology", ".ttl")) {
        auto text = read_file(file);
        if (!text) {
            diags.push_back({{1, 1}, "unreadable file " + file.string(), Severity::Error});
            continue;
        }
        auto parsed = parse_turtle(*text);
        add_prefixed(diags, file, parsed.diagnostics);
        if (parsed.ok()) {
            Graph relabeled = relabel_blanks(parsed.graph, file);
            ontology.merge(relabeled);
            kb.graph.merge(relabeled);
        }
    }
    for (const auto& file : sorted_files(root / "services", ".ttl")) {
        auto text = read_file(file);
        if (!text) {
            diags.push_back({{1, 1}, "unreadable file " + file.string(), Severity::Error});
            continue;
        }
        auto parsed = parse_turtle(*text);
        add_prefixed(diags, file, parsed.diagnostics);
        if (parsed.ok()) kb.graph.merge(relabel_blanks(parsed.graph, file));
    }

    // Queries, keyed by filename for attachment references.
    std::map<std::string, Query> queries;
    std::map<std::string, fs::path> query_files;
    std::map<std::string, std::string> query_texts;
    for (const auto& file : sorted_files(root / "queries", ".rq")) {
        auto text = read_file(file);
        if (!text) {
            diags.push_back({{1, 1}, "unreadable file " + file.string(), Severity::Error});
            continue;
        }
        auto parsed = parse_query(*text);
        add_prefixed(diags, file, parsed.diagnostics);
        if (parsed.ok()) {
            std::string ref = file.filename().string();
            queries[ref] = std::move(*parsed.query);
            query_files[ref] = file;
            query_texts[ref] = *text;
        }
    }

    // Maps.
    std::map<std::string, fs::path> map_origins;
    for (const auto& file : sorted_files(root / "maps", ".map")) {
        auto text = read_file(file);
        if (!text) {
            diags.push_back({{1, 1}, "unreadable file " + file.string(), Severity::Error});
            continue;
        }
        auto parsed = parse_map_dsl(*text);
        add_prefixed(diags, file, parsed.diagnostics);
        if (!parsed.ok()) continue;
        for (auto& m : parsed.doc->maps) {
            if (map_origins.count(m.id)) {
                diags.push_back({{1, 1},
                                 file.filename().string() + ": duplicate map id \"" + m.id + "\"",
                                 Severity::Error});
                continue;
            }
            add_prefixed(diags, file, validate(m, ontology));
            map_origins[m.id] = file;
            kb.maps.push_back(std::move(m));
        }
    }

    // Dangling refinement and attachment references.
    std::set<std::string> used_queries;
    for (const auto& m : kb.maps) {
        for (const auto& [sid, target] : m.refinements) {
            bool found = std::any_of(kb.maps.begin(), kb.maps.end(),
                                     [&](const MapModel& other) { return other.id == target; });
            if (!found)
                diags.push_back({{1, 1},
                                 "map \"" + m.id + "\": section " + sid +
                                     " refines unknown map \"" + target + "\"",
                                 Severity::Error});
        }
        for (const auto& [sid, refs] : m.attachments)
            for (const auto& ref : refs) {
                used_queries.insert(ref);
                if (!queries.count(ref))
                    diags.push_back({{1, 1},
                                     "map \"" + m.id + "\": section " + sid +
                                         " references unknown query \"" + ref + "\"",
                                     Severity::Error});
            }
    }

    // Compile every map: refined maps head with the refining section's
    // signature, top-level maps with a synthetic head from their stop
    // intention.
    std::vector<Rule> rules;
    for (const auto& m : kb.maps) {
        std::vector<std::pair<const MapModel*, std::string>> refiners;
        for (const auto& parent : kb.maps)
            for (const auto& [sid, target] : parent.refinements)
                if (target == m.id && parent.find_section(sid))
                    refiners.push_back({&parent, sid});
        std::sort(refiners.begin(), refiners.end(),
                  [](const auto& a, const auto& b) {
                      return std::tie(a.first->id, a.second) < std::tie(b.first->id, b.second);
                  });

        std::optional<SectionPattern> head;
        if (!refiners.empty())
            head = section_signature(*refiners.front().first, refiners.front().second);
        auto compiled = compile_map(m, queries, head);
        add_prefixed(diags, map_origins.at(m.id), compiled.diagnostics);
        std::string origin = map_origins.at(m.id).string();
        for (auto& r : compiled.rules) {
            r.origin = origin;
            rules.push_back(std::move(r));
        }
        // Additional refiners reuse the same paths under disambiguated ids.
        for (std::size_t i = 1; i < refiners.size(); ++i) {
            auto extra = compile_map(m, {}, section_signature(*refiners[i].first, refiners[i].second));
            for (auto& r : extra.rules) {
                if (r.concrete()) continue;
                r.id = m.id + "@" + refiners[i].first->id + "." + refiners[i].second +
                       r.id.substr(m.id.size());
                r.origin = origin;
                rules.push_back(std::move(r));
            }
        }
    }

    // Standalone queries: a @signature comment turns one into a concrete
    // rule; otherwise an unreferenced query is loaded but inert.
    for (const auto& [ref, q] : queries) {
        std::string error;
        auto sig = parse_signature_comment(query_texts[ref], q.namespaces, error);
        if (!error.empty()) {
            diags.push_back({{1, 1}, ref + ": " + error, Severity::Error});
            continue;
        }
        if (!sig) {
            if (!used_queries.count(ref))
                diags.push_back({{1, 1},
                                 ref + ": query is not referenced by any map and has no "
                                       "@signature; it stays inert",
                                 Severity::Warning});
            continue;
        }
        if (q.kind != QueryKind::Select || q.projection.size() != 1) {
            diags.push_back({{1, 1},
                             ref + ": a @signature query must be a select with exactly one "
                                   "projected variable",
                             Severity::Error});
            continue;
        }
        Rule r;
        r.id = id_override(query_texts[ref]).value_or(query_files[ref].stem().string());
        r.head = *sig;
        r.body = ConcreteBody{q.body, q.projection.front()};
        r.namespaces = q.namespaces;
        r.origin = query_files[ref].string();
        rules.push_back(std::move(r));
    }

    // Hand-written rule files.
    for (const auto& file : sorted_files(root / "rules", ".rq")) {
        auto text = read_file(file);
        if (!text) {
            diags.push_back({{1, 1}, "unreadable file " + file.string(), Severity::Error});
            continue;
        }
        auto parsed = parse_rule_text(*text, file.stem().string());
        add_prefixed(diags, file, parsed.diagnostics);
        if (parsed.ok()) {
            parsed.rule->origin = file.string();
            rules.push_back(std::move(*parsed.rule));
        }
    }

    // Unique ids, sorted.
    std::sort(rules.begin(), rules.end(),
              [](const Rule& a, const Rule& b) { return a.id < b.id; });
    for (std::size_t i = 1; i < rules.size(); ++i)
        if (rules[i].id == rules[i - 1].id)
            diags.push_back({{1, 1}, "duplicate rule id \"" + rules[i].id + "\"",
                             Severity::Error});
    kb.rules = std::move(rules);

    kb.graph.seal();
    kb.hierarchy = subclass_closure(kb.graph);
    kb.services = extract_services(kb.graph);
    for (const auto& sd : kb.services) {
        for (const auto& p : sd.inputs)
            if (p.types.empty())
                diags.push_back({{1, 1},
                                 "service " + sd.iri + " has an untyped input parameter",
                                 Severity::Warning});
        for (const auto& p : sd.outputs)
            if (p.types.empty())
                diags.push_back({{1, 1},
                                 "service " + sd.iri + " has an untyped output parameter",
                                 Severity::Warning});
    }
    return result;
}

std::vector<FragmentSummary> list_fragments(
    const KnowledgeBase& kb,
    const std::optional<std::pair<std::string, std::string>>& verb_object,
    const EngineConfig& cfg) {
    std::vector<FragmentSummary> out;
    for (const auto& r : kb.rules) {
        if (verb_object) {
            SectionPattern goal;
            goal.target_verb = verb_object->first;
            goal.target_object = verb_object->second;
            if (!matches(r.head, goal, kb.hierarchy, cfg)) continue;
        }
        out.push_back({r.id, !r.concrete(), r.head, r.origin});
    }
    std::sort(out.begin(), out.end(), [](const FragmentSummary& a, const FragmentSummary& b) {
        return a.rule_id < b.rule_id;
    });
    return out;
}

}  // namespace satis
