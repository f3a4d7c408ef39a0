#include "satis/map_model.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

#include "satis/vocab.hpp"
#include "scan.hpp"

namespace satis {
namespace {

using detail::Scanner;

class MapDslParser {
public:
    explicit MapDslParser(const std::string& text) : scan_(text) {
        namespaces_["rdf"] = vocab::kRdfNs;
        namespaces_["rdfs"] = vocab::kRdfsNs;
    }

    MapParseResult run() {
        while (!failed_) {
            scan_.skip_ws_and_comments();
            if (scan_.eof()) break;
            if (scan_.peek() == '@') {
                parse_prefix_decl();
                continue;
            }
            SourceSpan at = scan_.span();
            std::string kw = scan_.read_local();
            if (kw == "map") {
                parse_map();
            } else {
                error(at, "expected 'map' or '@prefix'");
            }
        }
        if (failed_) return {std::nullopt, std::move(diags_)};
        for (auto& m : doc_.maps) m.namespaces = namespaces_;
        return {std::move(doc_), std::move(diags_)};
    }

private:
    void error(SourceSpan span, std::string message) {
        diags_.push_back({span, std::move(message), Severity::Error});
        failed_ = true;
    }

    void parse_prefix_decl() {
        SourceSpan at = scan_.span();
        scan_.match('@');
        if (scan_.read_local() != "prefix") {
            error(at, "expected @prefix directive");
            return;
        }
        scan_.skip_ws_and_comments();
        std::string pname = scan_.read_local();
        if (pname.empty() || !scan_.match(':')) {
            error(scan_.span(), "expected prefix name followed by ':'");
            return;
        }
        scan_.skip_ws_and_comments();
        if (!scan_.match('<')) {
            error(scan_.span(), "expected IRI reference");
            return;
        }
        std::string iri;
        while (!scan_.eof() && scan_.peek() != '>') iri += scan_.advance();
        if (!scan_.match('>') || iri.empty()) {
            error(at, "unterminated or empty IRI reference");
            return;
        }
        scan_.skip_ws_and_comments();
        if (!scan_.match('.')) {
            error(scan_.span(), "expected '.' after @prefix declaration");
            return;
        }
        namespaces_[pname] = iri;
    }

    std::optional<std::string> parse_string() {
        scan_.skip_ws_and_comments();
        SourceSpan at = scan_.span();
        if (!scan_.match('"')) {
            error(at, "expected string");
            return std::nullopt;
        }
        std::string out;
        while (!scan_.eof() && scan_.peek() != '"') {
            char c = scan_.advance();
            if (c == '\\' && !scan_.eof()) out += scan_.advance();
            else out += c;
        }
        if (!scan_.match('"')) {
            error(at, "unterminated string");
            return std::nullopt;
        }
        return out;
    }

    std::optional<std::string> parse_name() {
        scan_.skip_ws_and_comments();
        SourceSpan at = scan_.span();
        std::string n = scan_.read_local();
        if (n.empty()) {
            error(at, "expected name");
            return std::nullopt;
        }
        return n;
    }

    // qname or <iri>
    std::optional<std::string> parse_concept() {
        scan_.skip_ws_and_comments();
        SourceSpan at = scan_.span();
        if (scan_.match('<')) {
            std::string iri;
            while (!scan_.eof() && scan_.peek() != '>') iri += scan_.advance();
            if (!scan_.match('>') || iri.empty()) {
                error(at, "unterminated or empty IRI reference");
                return std::nullopt;
            }
            return iri;
        }
        std::string pname = scan_.read_local();
        if (pname.empty() || !scan_.match(':')) {
            error(at, "expected qname");
            return std::nullopt;
        }
        std::string local = scan_.read_local();
        auto it = namespaces_.find(pname);
        if (it == namespaces_.end()) {
            error(at, "unknown prefix " + pname);
            return std::nullopt;
        }
        return it->second + local;
    }

    bool expect(char c, const char* what) {
        scan_.skip_ws_and_comments();
        if (!scan_.match(c)) {
            error(scan_.span(), std::string("expected ") + what);
            return false;
        }
        return true;
    }

    bool expect_word(const std::string& w) {
        scan_.skip_ws_and_comments();
        SourceSpan at = scan_.span();
        if (scan_.read_local() != w) {
            error(at, "expected '" + w + "'");
            return false;
        }
        return true;
    }

    void parse_map() {
        MapModel m;
        auto id = parse_string();
        if (!id) return;
        m.id = *id;
        if (!expect('{', "'{'")) return;
        bool saw_start = false, saw_stop = false;
        SourceSpan map_at = scan_.span();
        std::set<std::string> intention_names, section_ids;
        while (!failed_) {
            scan_.skip_ws_and_comments();
            if (scan_.match('}')) break;
            if (scan_.eof()) {
                error(map_at, "unterminated map block");
                return;
            }
            SourceSpan at = scan_.span();
            std::string kw = scan_.read_local();
            if (kw == "start") {
                auto n = parse_name();
                if (!n) return;
                if (saw_start) {
                    error(at, "duplicate start declaration");
                    return;
                }
                m.start = *n;
                saw_start = true;
            } else if (kw == "stop") {
                auto n = parse_name();
                if (!n) return;
                if (saw_stop) {
                    error(at, "duplicate stop declaration");
                    return;
                }
                m.stop = *n;
                saw_stop = true;
            } else if (kw == "intention") {
                auto n = parse_name();
                if (!n) return;
                if (!intention_names.insert(*n).second) {
                    error(at, "duplicate intention name " + *n);
                    return;
                }
                if (!expect('{', "'{'")) return;
                if (!expect_word("verb")) return;
                auto verb = parse_concept();
                if (!verb) return;
                if (!expect_word("object")) return;
                auto object = parse_concept();
                if (!object) return;
                if (!expect('}', "'}'")) return;
                m.intentions.push_back({*n, *verb, *object});
            } else if (kw == "section") {
                auto n = parse_name();
                if (!n) return;
                if (!section_ids.insert(*n).second) {
                    error(at, "duplicate section id " + *n);
                    return;
                }
                if (!expect('{', "'{'")) return;
                if (!expect_word("from")) return;
                auto from = parse_name();
                if (!from) return;
                if (!expect_word("to")) return;
                auto to = parse_name();
                if (!to) return;
                if (!expect_word("strategy")) return;
                auto label = parse_string();
                if (!label) return;
                Strategy strat{*label, std::nullopt};
                scan_.skip_ws_and_comments();
                if (scan_.peek() == 'm') {
                    // optional manner
                    SourceSpan m_at = scan_.span();
                    std::string w = scan_.read_local();
                    if (w == "manner") {
                        auto manner = parse_concept();
                        if (!manner) return;
                        strat.manner = *manner;
                    } else {
                        error(m_at, "expected 'manner' or '}'");
                        return;
                    }
                }
                if (!expect('}', "'}'")) return;
                m.sections.push_back({*n, *from, *to, std::move(strat)});
            } else if (kw == "refine") {
                auto n = parse_name();
                if (!n) return;
                if (!expect_word("with") || !expect_word("map")) return;
                auto target = parse_string();
                if (!target) return;
                m.refinements[*n] = *target;
            } else if (kw == "operationalise") {
                auto n = parse_name();
                if (!n) return;
                if (!expect_word("with") || !expect_word("query")) return;
                auto ref = parse_string();
                if (!ref) return;
                m.attachments[*n].push_back(*ref);
            } else {
                error(at, "unknown declaration '" + kw + "'");
                return;
            }
        }
        if (failed_) return;
        if (!saw_start || !saw_stop) {
            error(map_at, "missing start/stop declaration in map \"" + m.id + "\"");
            return;
        }
        doc_.maps.push_back(std::move(m));
    }

    Scanner scan_;
    MapDocument doc_;
    std::map<std::string, std::string> namespaces_;
    std::vector<ParseDiagnostic> diags_;
    bool failed_ = false;
};

std::string concept_text(const std::string& iri,
                         const std::map<std::string, std::string>& ns) {
    return compact_iri(iri, ns);  // <iri> form is accepted back by the parser
}

}  // namespace

const Intention* MapModel::find_intention(const std::string& name) const {
    for (const auto& i : intentions)
        if (i.name == name) return &i;
    return nullptr;
}

const Section* MapModel::find_section(const std::string& sid) const {
    for (const auto& s : sections)
        if (s.id == sid) return &s;
    return nullptr;
}

MapParseResult parse_map_dsl(const std::string& text) {
    return MapDslParser(text).run();
}

std::string serialize_map_dsl(const MapDocument& doc) {
    std::map<std::string, std::string> ns;
    for (const auto& m : doc.maps)
        for (const auto& [p, iri] : m.namespaces) ns[p] = iri;
    std::string out;
    for (const auto& [p, iri] : ns) out += "@prefix " + p + ": <" + iri + "> .\n";
    for (const auto& m : doc.maps) {
        out += "\nmap \"" + escape_string(m.id) + "\" {\n";
        out += "    start " + m.start + "\n";
        out += "    stop " + m.stop + "\n";
        for (const auto& i : m.intentions)
            out += "    intention " + i.name + " { verb " + concept_text(*i.verb, ns) +
                   " object " + concept_text(*i.object, ns) + " }\n";
        for (const auto& s : m.sections) {
            out += "    section " + s.id + " { from " + s.source + " to " + s.target +
                   " strategy \"" + escape_string(s.strategy.label) + "\"";
            if (s.strategy.manner) out += " manner " + concept_text(*s.strategy.manner, ns);
            out += " }\n";
        }
        for (const auto& [sid, target] : m.refinements)
            out += "    refine " + sid + " with map \"" + escape_string(target) + "\"\n";
        for (const auto& [sid, refs] : m.attachments)
            for (const auto& ref : refs)
                out += "    operationalise " + sid + " with query \"" + escape_string(ref) + "\"\n";
        out += "}\n";
    }
    return out;
}

std::vector<ParseDiagnostic> validate(const MapModel& m, const Graph& domain) {
    std::vector<ParseDiagnostic> diags;
    auto err = [&](std::string msg) {
        diags.push_back({{1, 1}, std::move(msg), Severity::Error});
    };
    auto warn = [&](std::string msg) {
        diags.push_back({{1, 1}, std::move(msg), Severity::Warning});
    };

    if (m.start == m.stop) err("start and stop must be distinct intentions");
    if (m.find_intention(m.start))
        err("start intention " + m.start + " must stay unqualified");
    if (!m.find_intention(m.stop))
        warn("stop intention " + m.stop + " is not formalised; the map cannot head a rule");

    auto resolves = [&](const std::string& name) {
        return m.find_intention(name) != nullptr || name == m.start || name == m.stop;
    };
    for (const auto& s : m.sections) {
        if (!resolves(s.source))
            err("section " + s.id + " has dangling source intention " + s.source);
        if (!resolves(s.target))
            err("section " + s.id + " has dangling target intention " + s.target);
        if (s.target == m.start) err("start intention has an incoming section (" + s.id + ")");
        if (s.source == m.stop) err("stop intention has an outgoing section (" + s.id + ")");
    }
    for (const auto& [sid, target] : m.refinements)
        if (!m.find_section(sid))
            err("refinement of unknown section " + sid + " (to map \"" + target + "\")");
    for (const auto& [sid, refs] : m.attachments)
        if (!m.find_section(sid)) err("operationalisation of unknown section " + sid);

    // Reachability from start.
    std::set<std::string> reachable{m.start};
    bool grew = true;
    while (grew) {
        grew = false;
        for (const auto& s : m.sections)
            if (reachable.count(s.source) && reachable.insert(s.target).second) grew = true;
    }
    for (const auto& i : m.intentions)
        if (!reachable.count(i.name))
            warn("intention " + i.name + " is unreachable from the start intention");

    // Domain vocabulary: warn on concepts the ontology never mentions.
    if (!domain.empty()) {
        std::set<std::string> mentioned;
        for (const auto& t : domain.triples())
            for (const auto* term : {&t.s, &t.p, &t.o})
                if (term->is_iri()) mentioned.insert(term->value);
        auto check = [&](const Slot& slot, const std::string& role, const std::string& owner) {
            if (slot && !mentioned.count(*slot))
                warn(role + " " + *slot + " of " + owner + " is not mentioned in the domain ontology");
        };
        for (const auto& i : m.intentions) {
            check(i.verb, "verb", "intention " + i.name);
            check(i.object, "object", "intention " + i.name);
        }
        for (const auto& s : m.sections)
            check(s.strategy.manner, "manner", "section " + s.id);
    }
    return diags;
}

PathEnumeration enumerate_paths(const MapModel& m, std::size_t max_paths) {
    std::vector<Section> ordered = m.sections;
    std::sort(ordered.begin(), ordered.end(),
              [](const Section& a, const Section& b) { return a.id < b.id; });

    PathEnumeration out;
    std::vector<Section> current;
    std::set<std::string> used;

    auto dfs = [&](auto&& self, const std::string& at) -> void {
        if (out.truncated) return;
        if (at == m.stop && !current.empty()) {
            if (out.paths.size() >= max_paths) {
                out.truncated = true;
                return;
            }
            out.paths.push_back({current});
            return;
        }
        for (const auto& s : ordered) {
            if (s.source != at || used.count(s.id)) continue;
            used.insert(s.id);
            current.push_back(s);
            self(self, s.target);
            current.pop_back();
            used.erase(s.id);
        }
    };
    dfs(dfs, m.start);
    return out;
}

SectionPattern section_signature(const MapModel& m, const std::string& section_id) {
    const Section* s = m.find_section(section_id);
    if (!s) throw std::out_of_range("unknown section id " + section_id);
    SectionPattern sp;
    if (const Intention* src = m.find_intention(s->source)) {
        sp.source_verb = src->verb;
        sp.source_object = src->object;
    }
    if (const Intention* tgt = m.find_intention(s->target)) {
        sp.target_verb = tgt->verb;
        sp.target_object = tgt->object;
    }
    sp.strategy_param = s->strategy.manner;
    return sp;
}

Graph to_triples(const MapModel& m) {
    Graph g;
    g.add_namespace("map", vocab::kMapNs);
    for (const auto& [p, iri] : m.namespaces) g.add_namespace(p, iri);

    auto intention_blank = [&](const std::string& name) {
        return Term::blank("i" + name);
    };
    auto slot_term = [&](const Slot& s, const std::string& any_iri) {
        return s ? Term::iri(*s) : Term::iri(any_iri);
    };

    std::set<std::string> emitted_intentions;
    auto emit_intention = [&](const std::string& name) {
        Term node = intention_blank(name);
        if (!emitted_intentions.insert(name).second) return node;
        const Intention* i = m.find_intention(name);
        Slot verb = i ? i->verb : Slot{};
        Slot object = i ? i->object : Slot{};
        g.insert({node, Term::iri(vocab::kHasVerb), slot_term(verb, vocab::kAnyVerb)});
        g.insert({node, Term::iri(vocab::kHasObject), slot_term(object, vocab::kAnyObject)});
        return node;
    };

    int n = 0;
    for (const auto& s : m.sections) {
        ++n;
        Term sec = Term::blank("s" + std::to_string(n));
        Term strat = Term::blank("g" + std::to_string(n));
        g.insert({sec, Term::iri(vocab::kHasStrategy), strat});
        g.insert({strat, Term::iri(vocab::kHasParameter),
                  slot_term(s.strategy.manner, vocab::kAnyParameter)});
        g.insert({sec, Term::iri(vocab::kHasSource), emit_intention(s.source)});
        g.insert({sec, Term::iri(vocab::kHasTarget), emit_intention(s.target)});
    }
    return g;
}

}  // namespace satis
