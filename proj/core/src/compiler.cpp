#include "satis/compiler.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "satis/graph.hpp"
#include "satis/vocab.hpp"

namespace satis {
namespace {

std::map<std::string, std::string> rule_namespaces(const MapModel& m) {
    std::map<std::string, std::string> ns = m.namespaces;
    ns["rdf"] = vocab::kRdfNs;
    ns["rdfs"] = vocab::kRdfsNs;
    ns["map"] = vocab::kMapNs;
    return ns;
}

std::string slot_text(const Slot& s, const std::string& any_iri,
                      const std::map<std::string, std::string>& ns) {
    return compact_iri(s ? *s : any_iri, ns);
}

// Emits the eight section-shaped triples for one head/subgoal, using the
// given blank suffix ("" for the template, "1", "2", ... for subgoals).
void emit_section_block(std::string& out, const SectionPattern& sp,
                        const std::string& suffix,
                        const std::map<std::string, std::string>& ns) {
    const std::string s = "_:s" + suffix, g = "_:g" + suffix, o = "_:o" + suffix,
                      i = "_:i" + suffix;
    out += "    " + s + " map:hasStrategy " + g + "\n";
    out += "    " + g + " map:hasParameter " + slot_text(sp.strategy_param, vocab::kAnyParameter, ns) + "\n";
    out += "    " + s + " map:hasSource " + o + "\n";
    out += "    " + o + " map:hasObject " + slot_text(sp.source_object, vocab::kAnyObject, ns) + "\n";
    out += "    " + o + " map:hasVerb " + slot_text(sp.source_verb, vocab::kAnyVerb, ns) + "\n";
    out += "    " + s + " map:hasTarget " + i + "\n";
    out += "    " + i + " map:hasObject " + slot_text(sp.target_object, vocab::kAnyObject, ns) + "\n";
    out += "    " + i + " map:hasVerb " + slot_text(sp.target_verb, vocab::kAnyVerb, ns) + "\n";
}

std::string pattern_term_text(const PatternTerm& t,
                              const std::map<std::string, std::string>& ns) {
    if (is_var(t)) return "?" + as_var(t).name;
    const Term& term = as_term(t);
    if (term.is_iri()) return compact_iri(term.value, ns);
    return term.lexical();
}

}  // namespace

CompileResult compile_map(const MapModel& m,
                          const std::map<std::string, Query>& queries,
                          const std::optional<SectionPattern>& refined_head,
                          std::size_t max_paths) {
    CompileResult result;
    auto err = [&](std::string msg) {
        result.diagnostics.push_back({{1, 1}, std::move(msg), Severity::Error});
    };
    auto warn = [&](std::string msg) {
        result.diagnostics.push_back({{1, 1}, std::move(msg), Severity::Warning});
    };
    const auto ns = rule_namespaces(m);

    // Path rules.
    std::optional<SectionPattern> head = refined_head;
    if (!head) {
        const Intention* stop = m.find_intention(m.stop);
        if (!stop) {
            err("map \"" + m.id + "\": stop intention " + m.stop +
                " is not formalised; cannot build a rule head for the map");
        } else {
            head = SectionPattern{std::nullopt, std::nullopt, std::nullopt,
                                  stop->verb, stop->object};
        }
    }
    if (head) {
        auto enumeration = enumerate_paths(m, max_paths);
        if (enumeration.truncated)
            warn("map \"" + m.id + "\": path enumeration truncated at " +
                 std::to_string(max_paths));
        int k = 0;
        for (const auto& path : enumeration.paths) {
            ++k;
            AbstractBody body;
            bool path_ok = true;
            for (const auto& section : path.sections) {
                SectionPattern sig = section_signature(m, section.id);
                if (!sig.concrete_target()) {
                    err("map \"" + m.id + "\": section " + section.id +
                        " targets an unformalised intention and cannot be a subgoal");
                    path_ok = false;
                    break;
                }
                body.subgoals.push_back(std::move(sig));
            }
            if (!path_ok) continue;
            Rule r;
            r.id = m.id + "#p" + std::to_string(k);
            r.head = *head;
            r.body = std::move(body);
            r.namespaces = ns;
            result.rules.push_back(std::move(r));
        }
    }

    // Attachment rules.
    for (const auto& [section_id, refs] : m.attachments) {
        if (!m.find_section(section_id)) {
            err("map \"" + m.id + "\": operationalisation of unknown section " + section_id);
            continue;
        }
        SectionPattern sig = section_signature(m, section_id);
        int j = 0;
        for (const auto& ref : refs) {
            ++j;
            auto it = queries.find(ref);
            if (it == queries.end()) {
                err("map \"" + m.id + "\": section " + section_id +
                    " references unknown query \"" + ref + "\"");
                continue;
            }
            const Query& q = it->second;
            if (q.kind != QueryKind::Select || q.projection.size() != 1) {
                err("map \"" + m.id + "\": query \"" + ref +
                    "\" must be a select with exactly one projected variable");
                continue;
            }
            Rule r;
            r.id = m.id + "#" + section_id + "#q" + std::to_string(j);
            r.head = sig;
            r.body = ConcreteBody{q.body, q.projection.front()};
            auto merged = ns;
            for (const auto& [p, iri] : q.namespaces) merged[p] = iri;
            r.namespaces = std::move(merged);
            result.rules.push_back(std::move(r));
        }
    }
    return result;
}

std::string emit_rule_text(const Rule& r) {
    auto ns = r.namespaces;
    ns["map"] = vocab::kMapNs;

    std::string out = "# @id: " + r.id + "\n";
    for (const auto& [prefix, iri] : ns) out += "prefix " + prefix + ": <" + iri + ">\n";
    out += "construct\n{\n";
    emit_section_block(out, r.head, "", ns);
    if (r.concrete())
        out += "    _:s map:hasResource ?" + r.as_concrete().service_var.name + "\n";
    out += "}\nwhere\n{\n";
    if (r.concrete()) {
        const auto& body = r.as_concrete();
        for (const auto& tp : body.pattern.patterns)
            out += "    " + pattern_term_text(tp.s, ns) + " " + pattern_term_text(tp.p, ns) +
                   " " + pattern_term_text(tp.o, ns) + "\n";
        for (const auto& f : body.pattern.filters)
            out += "    filter(?" + f.variable.name + " " + filter_op_text(f.op) + " " +
                   compact_iri(f.target_iri, ns) + ")\n";
    } else {
        int k = 0;
        for (const auto& subgoal : r.as_abstract().subgoals) {
            ++k;
            emit_section_block(out, subgoal, std::to_string(k), ns);
            out += "    _:s" + std::to_string(k) + " map:hasResource ?service" +
                   std::to_string(k) + "\n";
        }
    }
    out += "}\n";
    return out;
}

namespace {

// Triple index over a pattern list keyed by (blank subject, predicate IRI).
class SectionShape {
public:
    explicit SectionShape(const std::vector<TriplePattern>& patterns) {
        for (const auto& tp : patterns) {
            order_.push_back(&tp);
            if (!is_var(tp.s) && as_term(tp.s).is_blank() && !is_var(tp.p) &&
                as_term(tp.p).is_iri())
                index_[{as_term(tp.s).value, as_term(tp.p).value}].push_back(&tp);
        }
    }

    const TriplePattern* unique(const std::string& blank, const std::string& pred) const {
        auto it = index_.find({blank, pred});
        if (it == index_.end() || it->second.size() != 1) return nullptr;
        return it->second.front();
    }

    std::vector<std::string> subjects_with(const std::string& pred) const {
        std::vector<std::string> out;
        for (const auto* tp : order_) {
            if (is_var(tp->s) || !as_term(tp->s).is_blank()) continue;
            if (is_var(tp->p) || as_term(tp->p).value != pred) continue;
            out.push_back(as_term(tp->s).value);
        }
        return out;
    }

    std::size_t size() const { return order_.size(); }

private:
    std::map<std::pair<std::string, std::string>, std::vector<const TriplePattern*>> index_;
    std::vector<const TriplePattern*> order_;
};

Slot slot_from_object(const PatternTerm& o, bool& ok) {
    if (is_var(o) || !as_term(o).is_iri()) {
        ok = false;
        return std::nullopt;
    }
    const std::string& iri = as_term(o).value;
    if (iri == vocab::kAnyVerb || iri == vocab::kAnyObject || iri == vocab::kAnyParameter)
        return std::nullopt;
    return iri;
}

// Decodes one section block rooted at `s`; returns the count of consumed
// triples through `consumed` and the resource variable if present.
bool decode_section(const SectionShape& shape, const std::string& s, SectionPattern& sp,
                    std::optional<Variable>& resource_var, std::size_t& consumed,
                    std::string& error) {
    consumed = 0;
    auto need = [&](const std::string& blank, const std::string& pred) {
        const TriplePattern* tp = shape.unique(blank, pred);
        if (tp) ++consumed;
        return tp;
    };
    const TriplePattern* strat = need(s, vocab::kHasStrategy);
    const TriplePattern* src = need(s, vocab::kHasSource);
    const TriplePattern* tgt = need(s, vocab::kHasTarget);
    if (!strat || !src || !tgt || is_var(strat->o) || !as_term(strat->o).is_blank() ||
        is_var(src->o) || !as_term(src->o).is_blank() || is_var(tgt->o) ||
        !as_term(tgt->o).is_blank()) {
        error = "template not section-shaped (missing or malformed "
                "hasStrategy/hasSource/hasTarget around " + s + ")";
        return false;
    }
    const std::string g = as_term(strat->o).value;
    const std::string o = as_term(src->o).value;
    const std::string i = as_term(tgt->o).value;
    const TriplePattern* param = need(g, vocab::kHasParameter);
    const TriplePattern* s_obj = need(o, vocab::kHasObject);
    const TriplePattern* s_verb = need(o, vocab::kHasVerb);
    const TriplePattern* t_obj = need(i, vocab::kHasObject);
    const TriplePattern* t_verb = need(i, vocab::kHasVerb);
    if (!param || !s_obj || !s_verb || !t_obj || !t_verb) {
        error = "template not section-shaped (missing slot triples around " + s + ")";
        return false;
    }
    bool ok = true;
    sp.strategy_param = slot_from_object(param->o, ok);
    sp.source_object = slot_from_object(s_obj->o, ok);
    sp.source_verb = slot_from_object(s_verb->o, ok);
    sp.target_object = slot_from_object(t_obj->o, ok);
    sp.target_verb = slot_from_object(t_verb->o, ok);
    if (!ok) {
        error = "template not section-shaped (slot objects must be IRIs)";
        return false;
    }
    const TriplePattern* res = shape.unique(s, vocab::kHasResource);
    if (res) {
        ++consumed;
        if (!is_var(res->o)) {
            error = "hasResource object must be a variable";
            return false;
        }
        resource_var = as_var(res->o);
    }
    return true;
}

}  // namespace

RuleParseResult parse_rule_text(const std::string& text, const std::string& fallback_id) {
    RuleParseResult result;
    auto fail = [&](std::string msg) {
        result.diagnostics.push_back({{1, 1}, std::move(msg), Severity::Error});
        return result;
    };

    // Leading `# @id:` comment overrides the fallback id.
    std::string id = fallback_id;
    {
        std::istringstream lines(text);
        std::string line;
        while (std::getline(lines, line)) {
            std::size_t start = line.find_first_not_of(" \t");
            if (start == std::string::npos) continue;
            if (line[start] != '#') break;
            const std::string marker = "@id:";
            std::size_t at = line.find(marker, start);
            if (at != std::string::npos) {
                std::string rest = line.substr(at + marker.size());
                std::size_t b = rest.find_first_not_of(" \t");
                std::size_t e = rest.find_last_not_of(" \t\r");
                if (b != std::string::npos) id = rest.substr(b, e - b + 1);
                break;
            }
        }
    }

    auto parsed = parse_query(text);
    if (!parsed.ok()) {
        result.diagnostics = std::move(parsed.diagnostics);
        return result;
    }
    Query q = std::move(*parsed.query);
    if (q.kind != QueryKind::Construct) return fail("a rule must be a construct query");

    SectionShape tpl(q.construct_template);
    auto heads = tpl.subjects_with(vocab::kHasTarget);
    if (heads.size() != 1)
        return fail("template not section-shaped (expected exactly one hasTarget)");

    if (tpl.subjects_with(vocab::kHasResource).size() > 1)
        return fail("ambiguous service variable (multiple hasResource triples in template)");

    SectionPattern head;
    std::optional<Variable> service_var;
    std::size_t consumed = 0;
    std::string error;
    if (!decode_section(tpl, heads.front(), head, service_var, consumed, error))
        return fail(error);
    if (consumed != tpl.size())
        return fail("template not section-shaped (unexpected extra triples)");

    Rule r;
    r.id = id;
    r.head = head;
    r.namespaces = q.namespaces;

    if (service_var) {
        // Concrete rule: the where-block is the service pattern.
        bool bound = false;
        for (const auto& tp : q.body.patterns)
            for (const auto* t : {&tp.s, &tp.p, &tp.o})
                if (is_var(*t) && as_var(*t) == *service_var) bound = true;
        if (!bound)
            return fail("service variable ?" + service_var->name +
                        " is not bound in the rule body");
        r.body = ConcreteBody{std::move(q.body), *service_var};
        result.rule = std::move(r);
        return result;
    }

    // Abstract rule: the where-block is a sequence of section blocks.
    if (!q.body.filters.empty())
        return fail("an abstract rule body cannot contain filters");
    SectionShape body(q.body.patterns);
    auto subjects = body.subjects_with(vocab::kHasTarget);
    if (subjects.empty())
        return fail("rule body is not section-shaped and the template names no service "
                    "variable (missing hasResource)");
    AbstractBody ab;
    std::set<std::string> seen_vars;
    std::size_t total_consumed = 0;
    for (const auto& s : subjects) {
        SectionPattern sp;
        std::optional<Variable> res;
        std::size_t c = 0;
        if (!decode_section(body, s, sp, res, c, error)) return fail(error);
        if (!res) return fail("subgoal block " + s + " is missing hasResource");
        if (!seen_vars.insert(res->name).second)
            return fail("ambiguous service variable ?" + res->name +
                        " shared by two subgoal blocks");
        if (!sp.concrete_target())
            return fail("subgoal block " + s + " must have a concrete target intention");
        total_consumed += c;
        ab.subgoals.push_back(std::move(sp));
    }
    if (total_consumed != body.size())
        return fail("rule body contains triples outside the subgoal blocks");
    r.body = std::move(ab);
    result.rule = std::move(r);
    return result;
}

}  // namespace satis
