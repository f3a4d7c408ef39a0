// satis — command line interface to the semantic service memory.
//
// Exit codes: 0 success, 1 validation/usage failure, 2 I/O failure,
// 3 rendering failure.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "satis/compiler.hpp"
#include "satis/engine.hpp"
#include "satis/registry.hpp"
#include "satis/sparql.hpp"

namespace fs = std::filesystem;
using satis::Severity;

namespace {

constexpr int kOk = 0;
constexpr int kUsageOrValidation = 1;
constexpr int kIoFailure = 2;
constexpr int kRenderFailure = 3;

void print_diagnostics(const std::vector<satis::ParseDiagnostic>& diags) {
    for (const auto& d : diags) std::cerr << satis::format_diagnostic(d) << "\n";
}

fs::path resolve_root(const std::string& arg) {
    if (!arg.empty()) return arg;
    if (const char* env = std::getenv("SATIS_MEMORY")) return env;
    return {};
}

// Expands prefix:local against the memory's declared namespaces; accepts
// <iri> and bare absolute IRIs as-is.
std::optional<std::string> resolve_qname(const std::string& text,
                                         const satis::KnowledgeBase& kb) {
    if (text.empty()) return std::nullopt;
    if (text.front() == '<' && text.back() == '>') return text.substr(1, text.size() - 2);
    if (text.find("://") != std::string::npos) return text;
    std::size_t colon = text.find(':');
    if (colon == std::string::npos) return std::nullopt;
    std::string prefix = text.substr(0, colon);
    std::string local = text.substr(colon + 1);
    auto ns = kb.graph.namespaces();
    for (const auto& m : kb.maps) ns.insert(m.namespaces.begin(), m.namespaces.end());
    for (const auto& r : kb.rules) ns.insert(r.namespaces.begin(), r.namespaces.end());
    auto it = ns.find(prefix);
    if (it == ns.end()) return std::nullopt;
    return it->second + local;
}

std::string compact(const std::string& iri, const satis::KnowledgeBase& kb) {
    auto ns = kb.graph.namespaces();
    for (const auto& m : kb.maps) ns.insert(m.namespaces.begin(), m.namespaces.end());
    for (const auto& r : kb.rules) ns.insert(r.namespaces.begin(), r.namespaces.end());
    return satis::compact_iri(iri, ns);
}

std::string render_slot(const satis::Slot& s, const satis::KnowledgeBase& kb) {
    return s ? compact(*s, kb) : "*";
}

std::string render_signature(const satis::SectionPattern& sig,
                             const satis::KnowledgeBase& kb) {
    return "(" + render_slot(sig.source_verb, kb) + " " + render_slot(sig.source_object, kb) +
           " / " + render_slot(sig.strategy_param, kb) + " -> " +
           render_slot(sig.target_verb, kb) + " " + render_slot(sig.target_object, kb) + ")";
}

// Loads a memory root; returns the process exit code to use on failure.
std::optional<int> load_or_fail(const fs::path& root, satis::LoadResult& out) {
    if (root.empty()) {
        std::cerr << "error: no memory directory given and SATIS_MEMORY is unset\n";
        return kUsageOrValidation;
    }
    if (!fs::is_directory(root)) {
        std::cerr << "error: " << root.string() << " is not a directory\n";
        return kIoFailure;
    }
    out = satis::load_memory(root);
    print_diagnostics(out.diagnostics);
    if (!out.ok()) return kUsageOrValidation;
    return std::nullopt;
}

int cmd_validate(const std::string& root_arg) {
    satis::LoadResult loaded;
    if (auto rc = load_or_fail(resolve_root(root_arg), loaded)) return *rc;
    std::cout << "memory ok: " << loaded.kb.maps.size() << " maps, "
              << loaded.kb.services.size() << " services, " << loaded.kb.rules.size()
              << " rules\n";
    return kOk;
}

int cmd_fragments(const std::string& root_arg, const std::string& verb,
                  const std::string& object) {
    satis::LoadResult loaded;
    if (auto rc = load_or_fail(resolve_root(root_arg), loaded)) return *rc;
    const auto& kb = loaded.kb;

    std::optional<std::pair<std::string, std::string>> filter;
    if (!verb.empty() || !object.empty()) {
        if (verb.empty() || object.empty()) {
            std::cerr << "error: --verb and --object must be given together\n";
            return kUsageOrValidation;
        }
        auto v = resolve_qname(verb, kb);
        auto o = resolve_qname(object, kb);
        if (!v || !o) {
            std::cerr << "error: cannot resolve " << (v ? object : verb)
                      << " against the memory's prefixes\n";
            return kUsageOrValidation;
        }
        filter = {{*v, *o}};
    }
    for (const auto& f : satis::list_fragments(kb, filter))
        std::cout << f.rule_id << "\t" << (f.is_abstract ? "abstract" : "concrete") << "\t"
                  << render_signature(f.signature, kb) << "\n";
    return kOk;
}

int cmd_compile(const std::string& map_file, const std::string& out_dir) {
    std::ifstream in(map_file, std::ios::binary);
    if (!in) {
        std::cerr << "error: cannot read " << map_file << "\n";
        return kIoFailure;
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    auto parsed = satis::parse_map_dsl(buf.str());
    print_diagnostics(parsed.diagnostics);
    if (!parsed.ok()) return kUsageOrValidation;

    // Attachment queries are looked up next to the map file, preferring a
    // sibling queries/ directory.
    fs::path base = fs::path(map_file).parent_path();
    std::map<std::string, satis::Query> queries;
    bool failed = false;
    for (const auto& m : parsed.doc->maps) {
        satis::Graph no_domain;
        auto issues = satis::validate(m, no_domain);
        for (const auto& d : issues)
            if (d.severity == Severity::Error) {
                std::cerr << map_file << ": " << satis::format_diagnostic(d) << "\n";
                failed = true;
            }
        for (const auto& [sid, refs] : m.attachments)
            for (const auto& ref : refs) {
                if (queries.count(ref)) continue;
                fs::path candidate = base / "queries" / ref;
                if (!fs::is_regular_file(candidate)) candidate = base / ref;
                if (!fs::is_regular_file(candidate))
                    candidate = base.parent_path() / "queries" / ref;
                std::ifstream qin(candidate, std::ios::binary);
                if (!qin) {
                    std::cerr << "error: query " << ref << " (section " << sid
                              << ") not found near " << map_file << "\n";
                    failed = true;
                    continue;
                }
                std::ostringstream qbuf;
                qbuf << qin.rdbuf();
                auto q = satis::parse_query(qbuf.str());
                print_diagnostics(q.diagnostics);
                if (!q.ok()) {
                    failed = true;
                    continue;
                }
                queries[ref] = std::move(*q.query);
            }
    }
    if (failed) return kUsageOrValidation;

    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec || !fs::is_directory(out_dir)) {
        std::cerr << "error: cannot create output directory " << out_dir << "\n";
        return kIoFailure;
    }

    for (const auto& m : parsed.doc->maps) {
        // A map refined by a sibling in the same file compiles against that
        // section's signature; others get the synthetic stop head.
        std::optional<satis::SectionPattern> head;
        for (const auto& parent : parsed.doc->maps)
            for (const auto& [sid, target] : parent.refinements)
                if (target == m.id && parent.find_section(sid) && !head)
                    head = satis::section_signature(parent, sid);
        auto compiled = satis::compile_map(m, queries, head);
        print_diagnostics(compiled.diagnostics);
        if (!compiled.ok()) return kUsageOrValidation;
        for (const auto& r : compiled.rules) {
            std::string name = r.id;
            for (auto& c : name)
                if (c == '#' || c == '/') c = '.';
            fs::path target = fs::path(out_dir) / (name + ".rq");
            std::ofstream out(target, std::ios::binary | std::ios::trunc);
            if (!out) {
                std::cerr << "error: cannot write " << target.string() << "\n";
                return kIoFailure;
            }
            out << satis::emit_rule_text(r);
            std::cout << target.string() << "\n";
        }
    }
    return kOk;
}

int cmd_render(const std::string& root_arg, const std::string& verb,
               const std::string& object, bool as_json, bool explain,
               const satis::EngineConfig& cfg) {
    satis::LoadResult loaded;
    if (auto rc = load_or_fail(resolve_root(root_arg), loaded)) return *rc;
    const auto& kb = loaded.kb;

    auto v = resolve_qname(verb, kb);
    auto o = resolve_qname(object, kb);
    if (!v || !o) {
        std::cerr << "error: cannot resolve " << (v ? object : verb)
                  << " against the memory's prefixes\n";
        return kUsageOrValidation;
    }

    satis::SectionPattern goal;
    goal.target_verb = *v;
    goal.target_object = *o;

    satis::Engine engine(kb.graph, kb.hierarchy, kb.rules, cfg);
    auto report = engine.render(goal);
    satis::FlattenResult flat;
    if (report.ok()) flat = engine.flatten(report);

    if (as_json) {
        nlohmann::ordered_json j;
        j["goal"] = {{"verb", *v}, {"object", *o}};
        j["status"] = report.ok() ? "success" : "failure";
        if (!report.ok()) j["reason"] = satis::failure_reason_text(report.reason);
        j["pipelines"] = nlohmann::ordered_json::array();
        for (const auto& p : flat.pipelines) {
            nlohmann::ordered_json steps = nlohmann::ordered_json::array();
            for (const auto& s : p.steps) {
                nlohmann::ordered_json step;
                step["verb"] = s.goal.target_verb.value_or("");
                step["object"] = s.goal.target_object.value_or("");
                step["services"] = s.services;
                steps.push_back(std::move(step));
            }
            j["pipelines"].push_back({{"steps", std::move(steps)}});
        }
        j["truncated"] = flat.truncated;
        std::cout << j.dump(2) << "\n";
    } else {
        std::cout << "goal " << render_signature(goal, kb) << "\n";
        if (!report.ok()) {
            std::cout << "rendering failed: " << satis::failure_reason_text(report.reason)
                      << "\n";
        } else {
            std::size_t n = 0;
            for (const auto& p : flat.pipelines) {
                std::cout << "pipeline " << ++n << ":\n";
                std::size_t k = 0;
                for (const auto& s : p.steps) {
                    std::cout << "  step " << ++k << ": "
                              << render_slot(s.goal.target_verb, kb) << " "
                              << render_slot(s.goal.target_object, kb) << " ::";
                    for (const auto& svc : s.services) std::cout << " " << compact(svc, kb);
                    std::cout << "\n";
                }
            }
            if (flat.truncated) std::cout << "(pipeline list truncated)\n";
        }
    }
    if (explain) std::cout << satis::Engine::explain(report);
    return report.ok() ? kOk : kRenderFailure;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"goal-driven semantic service retrieval"};
    app.require_subcommand(1);

    std::string root, verb, object, map_file, out_dir = ".";
    bool as_json = false, explain = false, no_subsumption = false;
    satis::EngineConfig cfg;

    auto* validate = app.add_subcommand("validate", "load a memory and report diagnostics");
    validate->add_option("dir", root, "memory root (default: $SATIS_MEMORY)");

    auto* fragments = app.add_subcommand("fragments", "list rule fragments");
    fragments->add_option("dir", root, "memory root (default: $SATIS_MEMORY)");
    fragments->add_option("--verb", verb, "goal verb filter (qname or <iri>)");
    fragments->add_option("--object", object, "goal object filter (qname or <iri>)");

    auto* compile = app.add_subcommand("compile", "compile a map file to rule files");
    compile->add_option("map", map_file, "map DSL file")->required();
    compile->add_option("-o,--output", out_dir, "output directory (default: .)");

    auto* render = app.add_subcommand("render", "retrieve service pipelines for a goal");
    render->add_option("dir", root, "memory root (default: $SATIS_MEMORY)");
    render->add_option("--verb", verb, "goal verb (qname or <iri>)")->required();
    render->add_option("--object", object, "goal object (qname or <iri>)")->required();
    render->add_flag("--json", as_json, "emit a JSON report");
    render->add_flag("--explain", explain, "append the exploration trace");
    render->add_option("--max-depth", cfg.max_depth, "recursion depth bound");
    render->add_flag("--no-subsumption", no_subsumption, "disable subclass goal matching");
    render->add_option("--max-pipelines", cfg.max_pipelines, "pipeline enumeration cap");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kOk : kUsageOrValidation;
    }
    cfg.subsumption_matching = !no_subsumption;

    if (validate->parsed()) return cmd_validate(root);
    if (fragments->parsed()) return cmd_fragments(root, verb, object);
    if (compile->parsed()) return cmd_compile(map_file, out_dir);
    return cmd_render(root, verb, object, as_json, explain, cfg);
}
