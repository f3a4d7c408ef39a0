#pragma once
// Map-to-rule translation plus the CONSTRUCT-form rule text format.
//
// Rule files hold one CONSTRUCT query whose template encodes the head
// section (blank nodes _:s/_:g/_:o/_:i, wildcards as map:Any*). Concrete
// rules add `_:s map:hasResource ?service` to the template and carry the
// service query as their where-block; abstract rules carry one
// section-shaped block per subgoal, each with its own resource variable.
// Rule id = file stem, overridable by a leading `# @id:` comment.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "satis/diagnostics.hpp"
#include "satis/map_model.hpp"
#include "satis/rule.hpp"

namespace satis {

struct CompileResult {
    std::vector<Rule> rules;
    std::vector<ParseDiagnostic> diagnostics;
    bool ok() const { return !has_errors(diagnostics); }
};

// One abstract rule per start-to-stop path (id `<map>#p<k>`) and one
// concrete rule per query attachment (id `<map>#<section>#q<j>`). The head
// of path rules is `refined_head` when the map refines a section, or a
// synthetic head built from the map's stop intention for top-level maps.
CompileResult compile_map(const MapModel& m,
                          const std::map<std::string, Query>& queries,
                          const std::optional<SectionPattern>& refined_head = std::nullopt,
                          std::size_t max_paths = 64);

std::string emit_rule_text(const Rule& r);

struct RuleParseResult {
    std::optional<Rule> rule;
    std::vector<ParseDiagnostic> diagnostics;
    bool ok() const { return rule.has_value(); }
};

// Inverse of emit_rule_text on all compiled rules; also accepts hand-written
// CONSTRUCT rules with a section-shaped template.
RuleParseResult parse_rule_text(const std::string& text,
                                const std::string& fallback_id = "rule");

}  // namespace satis
