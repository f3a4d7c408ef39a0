#pragma once
// Backward chaining over fragment rules: goals are matched against rule
// heads (wildcards plus object subsumption), concrete bodies are evaluated
// against the service registry, abstract bodies recurse. Failures are
// values, never exceptions.

#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "satis/graph.hpp"
#include "satis/hierarchy.hpp"
#include "satis/rule.hpp"

namespace satis {

struct EngineConfig {
    std::size_t max_depth = 32;
    bool subsumption_matching = true;
    std::size_t max_pipelines = 256;
    bool memoize = true;
};

// Slot-wise compatibility of a rule head with a goal. Object slots also
// accept goal objects subsumed by the head object when enabled.
bool matches(const SectionPattern& head, const SectionPattern& goal,
             const ClassHierarchy& h, const EngineConfig& cfg);

enum class FailureReason { None, NoMatchingRule, NoServices, DepthExceeded, Cycle };

std::string failure_reason_text(FailureReason r);

struct DerivationSet;
using DerivationSetPtr = std::shared_ptr<const DerivationSet>;

// One successful rule application. Concrete carries the matched services,
// abstract carries one proved set per subgoal.
struct Derivation {
    SectionPattern goal;
    std::string rule_id;
    std::optional<std::set<std::string>> services;  // engaged iff concrete
    std::vector<DerivationSetPtr> children;         // engaged iff abstract

    bool concrete() const { return services.has_value(); }
};

struct DerivationSet {
    SectionPattern goal;
    std::vector<Derivation> alternatives;  // rule-id order, non-empty
};

struct RenderingReport {
    SectionPattern goal;
    DerivationSetPtr root;  // null iff the render failed
    FailureReason reason = FailureReason::None;
    std::string trace;  // exploration log consumed by explain()

    bool ok() const { return root != nullptr; }
};

struct PipelineStep {
    SectionPattern goal;
    std::set<std::string> services;
    friend auto operator<=>(const PipelineStep&, const PipelineStep&) = default;
};

struct Pipeline {
    std::vector<PipelineStep> steps;
    friend auto operator<=>(const Pipeline&, const Pipeline&) = default;
};

struct FlattenResult {
    std::vector<Pipeline> pipelines;
    bool truncated = false;
};

class Engine {
public:
    // Stores and rules must outlive the engine; rules are sorted by id.
    Engine(const Graph& graph, const ClassHierarchy& hierarchy,
           std::vector<Rule> rules, EngineConfig cfg = {});

    // Proves the goal with a fresh memo table and an empty goal stack.
    RenderingReport render(const SectionPattern& goal) const;

    // Enumerates proof choices into pipelines; throws std::logic_error on a
    // failed report.
    FlattenResult flatten(const RenderingReport& report) const;

    static std::string explain(const RenderingReport& report);

    const std::vector<Rule>& rules() const { return rules_; }
    const EngineConfig& config() const { return cfg_; }

private:
    const Graph* graph_;
    const ClassHierarchy* hierarchy_;
    std::vector<Rule> rules_;
    EngineConfig cfg_;
};

// Structural equality of proof forests (ignores sharing).
bool same_derivations(const DerivationSetPtr& a, const DerivationSetPtr& b);

}  // namespace satis
