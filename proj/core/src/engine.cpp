#include "satis/engine.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

#include "satis/query_eval.hpp"

namespace satis {

std::string failure_reason_text(FailureReason r) {
    switch (r) {
        case FailureReason::None: return "none";
        case FailureReason::NoMatchingRule: return "no-matching-rule";
        case FailureReason::NoServices: return "no-services";
        case FailureReason::DepthExceeded: return "depth-exceeded";
        case FailureReason::Cycle: return "cycle";
    }
    return "none";
}

bool matches(const SectionPattern& head, const SectionPattern& goal,
             const ClassHierarchy& h, const EngineConfig& cfg) {
    auto slot_ok = [&](const Slot& hs, const Slot& gs, bool object_slot) {
        if (!hs || !gs) return true;  // wildcard on either side
        if (*hs == *gs) return true;
        if (object_slot && cfg.subsumption_matching) return h.is_subclass(*gs, *hs);
        return false;
    };
    return slot_ok(head.source_verb, goal.source_verb, false) &&
           slot_ok(head.source_object, goal.source_object, true) &&
           slot_ok(head.strategy_param, goal.strategy_param, false) &&
           slot_ok(head.target_verb, goal.target_verb, false) &&
           slot_ok(head.target_object, goal.target_object, true);
}

namespace {

struct Outcome {
    DerivationSetPtr set;
    FailureReason reason = FailureReason::None;
    // True when the result depended on the goal stack or the depth bound;
    // such results are not memoizable.
    bool transient = false;
};

class Prover {
public:
    Prover(const Graph& g, const ClassHierarchy& h, const std::vector<Rule>& rules,
           const EngineConfig& cfg)
        : graph_(g), hierarchy_(h), rules_(rules), cfg_(cfg) {}

    Outcome prove(const SectionPattern& goal, std::size_t depth, int indent) {
        log(indent, "goal " + to_string(goal));
        if (depth > cfg_.max_depth) {
            log(indent, "  depth limit exceeded");
            return {nullptr, FailureReason::DepthExceeded, true};
        }
        if (std::find(stack_.begin(), stack_.end(), goal) != stack_.end()) {
            log(indent, "  cycle detected, abandoning branch");
            return {nullptr, FailureReason::Cycle, true};
        }
        if (cfg_.memoize) {
            auto it = memo_.find(goal);
            if (it != memo_.end()) {
                log(indent, "  (shared result)");
                return it->second;
            }
        }

        stack_.push_back(goal);
        std::vector<Derivation> alternatives;
        bool matched = false;
        bool saw_depth = false, saw_no_services = false;
        bool transient = false;

        for (const auto& rule : rules_) {
            if (!matches(rule.head, goal, hierarchy_, cfg_)) continue;
            matched = true;
            log(indent, "  rule " + rule.id);
            if (rule.concrete()) {
                const auto& body = rule.as_concrete();
                std::set<std::string> services;
                for (const auto& b : eval_pattern(graph_, hierarchy_, body.pattern)) {
                    auto it = b.terms.find(body.service_var);
                    if (it != b.terms.end() && it->second.is_iri())
                        services.insert(it->second.value);
                }
                if (services.empty()) {
                    log(indent, "    no matching services");
                    saw_no_services = true;
                    continue;
                }
                std::string listing;
                for (const auto& s : services) listing += (listing.empty() ? "" : ", ") + s;
                log(indent, "    services {" + listing + "}");
                alternatives.push_back({goal, rule.id, std::move(services), {}});
            } else {
                std::vector<DerivationSetPtr> children;
                bool branch_ok = true;
                for (const auto& subgoal : rule.as_abstract().subgoals) {
                    Outcome sub = prove(subgoal, depth + 1, indent + 2);
                    transient |= sub.transient;
                    if (!sub.set) {
                        log(indent, "    subgoal failed: " + failure_reason_text(sub.reason));
                        if (sub.reason == FailureReason::DepthExceeded) saw_depth = true;
                        if (sub.reason == FailureReason::NoServices) saw_no_services = true;
                        branch_ok = false;
                        break;
                    }
                    children.push_back(std::move(sub.set));
                }
                if (branch_ok)
                    alternatives.push_back({goal, rule.id, std::nullopt, std::move(children)});
            }
        }
        stack_.pop_back();

        Outcome out;
        out.transient = transient;
        if (!alternatives.empty()) {
            out.set = std::make_shared<DerivationSet>(
                DerivationSet{goal, std::move(alternatives)});
        } else if (!matched) {
            out.reason = FailureReason::NoMatchingRule;
            log(indent, "  no rule head matches this goal");
        } else if (saw_depth) {
            out.reason = FailureReason::DepthExceeded;
        } else if (saw_no_services) {
            out.reason = FailureReason::NoServices;
        } else {
            // Every matching application died on a cycle; the goal is
            // effectively uncovered.
            out.reason = FailureReason::NoMatchingRule;
        }
        if (cfg_.memoize && !out.transient) memo_[goal] = out;
        return out;
    }

    std::string take_trace() { return std::move(trace_); }

private:
    void log(int indent, const std::string& line) {
        trace_.append(static_cast<std::size_t>(indent), ' ');
        trace_ += line;
        trace_ += '\n';
    }

    const Graph& graph_;
    const ClassHierarchy& hierarchy_;
    const std::vector<Rule>& rules_;
    const EngineConfig& cfg_;
    std::vector<SectionPattern> stack_;
    std::map<SectionPattern, Outcome> memo_;
    std::string trace_;
};

}  // namespace

Engine::Engine(const Graph& graph, const ClassHierarchy& hierarchy,
               std::vector<Rule> rules, EngineConfig cfg)
    : graph_(&graph), hierarchy_(&hierarchy), rules_(std::move(rules)), cfg_(cfg) {
    std::sort(rules_.begin(), rules_.end(),
              [](const Rule& a, const Rule& b) { return a.id < b.id; });
}

RenderingReport Engine::render(const SectionPattern& goal) const {
    Prover prover(*graph_, *hierarchy_, rules_, cfg_);
    Outcome out = prover.prove(goal, 1, 0);
    RenderingReport report;
    report.goal = goal;
    report.root = out.set;
    report.reason = out.set ? FailureReason::None : out.reason;
    report.trace = prover.take_trace();
    return report;
}

FlattenResult Engine::flatten(const RenderingReport& report) const {
    if (!report.ok()) throw std::logic_error("cannot flatten a failed rendering report");

    FlattenResult result;
    std::map<const DerivationSet*, std::vector<Pipeline>> cache;

    auto cap = cfg_.max_pipelines;
    auto clip = [&](std::vector<Pipeline>& ps) {
        if (ps.size() > cap) {
            ps.resize(cap);
            result.truncated = true;
        }
    };

    auto expand_set = [&](auto&& self, const DerivationSet& set) -> std::vector<Pipeline> {
        auto it = cache.find(&set);
        if (it != cache.end()) return it->second;
        std::vector<Pipeline> out;
        for (const auto& alt : set.alternatives) {
            if (alt.concrete()) {
                out.push_back({{PipelineStep{alt.goal, *alt.services}}});
            } else {
                // Product over subgoal pipelines, earlier subgoals as outer
                // choice; splice in path order.
                std::vector<Pipeline> acc{Pipeline{}};
                for (const auto& child : alt.children) {
                    std::vector<Pipeline> next;
                    auto child_pipes = self(self, *child);
                    for (const auto& prefix : acc) {
                        for (const auto& cont : child_pipes) {
                            if (next.size() >= cap + 1) break;
                            Pipeline combined = prefix;
                            combined.steps.insert(combined.steps.end(),
                                                  cont.steps.begin(), cont.steps.end());
                            next.push_back(std::move(combined));
                        }
                        if (next.size() >= cap + 1) break;
                    }
                    acc = std::move(next);
                }
                for (auto& p : acc) {
                    out.push_back(std::move(p));
                    if (out.size() >= cap + 1) break;
                }
            }
            if (out.size() >= cap + 1) break;
        }
        clip(out);
        cache[&set] = out;
        return out;
    };

    result.pipelines = expand_set(expand_set, *report.root);
    return result;
}

std::string Engine::explain(const RenderingReport& report) {
    std::string out = "render " + to_string(report.goal) + ": ";
    out += report.ok() ? "success" : "failure (" + failure_reason_text(report.reason) + ")";
    out += "\n";
    out += report.trace;
    return out;
}

bool same_derivations(const DerivationSetPtr& a, const DerivationSetPtr& b) {
    if (!a || !b) return !a && !b;
    if (a->goal != b->goal) return false;
    if (a->alternatives.size() != b->alternatives.size()) return false;
    for (std::size_t i = 0; i < a->alternatives.size(); ++i) {
        const auto& da = a->alternatives[i];
        const auto& db = b->alternatives[i];
        if (da.goal != db.goal || da.rule_id != db.rule_id) return false;
        if (da.services != db.services) return false;
        if (da.children.size() != db.children.size()) return false;
        for (std::size_t j = 0; j < da.children.size(); ++j)
            if (!same_derivations(da.children[j], db.children[j])) return false;
    }
    return true;
}

}  // namespace satis
