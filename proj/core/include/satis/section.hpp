#pragma once
// Section signatures: the five-slot shape shared by fragment rule heads,
// goals and map sections. An empty slot means "any".

#include <compare>
#include <map>
#include <optional>
#include <string>

namespace satis {

// nullopt = unconstrained (the AnyVerb/AnyObject/AnyParameter wildcards).
using Slot = std::optional<std::string>;

struct SectionPattern {
    Slot source_verb;
    Slot source_object;
    Slot strategy_param;
    Slot target_verb;
    Slot target_object;

    bool concrete_target() const {
        return target_verb.has_value() && target_object.has_value();
    }

    friend auto operator<=>(const SectionPattern&, const SectionPattern&) = default;
};

// Human-readable rendering, e.g. "(* * / * -> dom:Debiasing dom:Image)".
std::string to_string(const SectionPattern& sp,
                      const std::map<std::string, std::string>& namespaces = {});

}  // namespace satis
