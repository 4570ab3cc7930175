#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "rtsync/model/model.hpp"
#include "rtsync/tgg/correspondence.hpp"
#include "rtsync/tgg/rule.hpp"
#include "rtsync/tgg/search_plan.hpp"

namespace rtsync::tgg {

/// Distinct elements examined, bound, created, updated or deleted by one
/// engine call, keyed by graph space so ids from different models never
/// collapse.
struct TouchSet {
    enum Space { SourceSpace = 0, TargetSpace = 1, CorrSpace = 2 };
    std::set<std::pair<int, ElementId>> items;
    void add(Space space, ElementId id) { items.emplace(space, id); }
    std::size_t size() const { return items.size(); }
};

inline TouchSet::Space touchSpace(Domain d) {
    switch (d) {
    case Domain::Source: return TouchSet::SourceSpace;
    case Domain::Corr: return TouchSet::CorrSpace;
    case Domain::Target: return TouchSet::TargetSpace;
    }
    return TouchSet::SourceSpace;
}

struct Binding {
    std::map<std::string, ElementId> vars; // concrete bindings (corr vars -> corr ids)
    std::set<std::string> materialized;    // vars to create with defaults (backward)
};

/// All admissible complete bindings for one rule, deterministic: candidates
/// ascend by element id at every step. `anchor` narrows the anchor step to
/// one concrete element; nullopt enumerates. Matches are injective per
/// graph, respect coverage (created input-domain elements must be
/// uncovered) and satisfy all attribute filters applicable to `dir`.
/// Stops after `limit` bindings when limit > 0.
std::vector<Binding> matchRule(const TggRule& rule, const SearchPlan& plan, Dir dir,
                               const Model& input, const Model& output,
                               const CorrespondenceModel& corr,
                               std::optional<ElementId> anchor, TouchSet* touch = nullptr,
                               std::size_t limit = 0);

/// Filter/assignment classification used by matching, application and the
/// consistency checker.
bool constraintAssignsInDir(const TggRule& rule, const AttributeConstraint& c, Dir dir);

/// Evaluates an expression over a concrete binding. Vars must be bound.
AttrValue evalExpr(const AttrExpr& expr, const TggRule& rule, const Binding& binding,
                   const Model& source, const Model& target);

/// Reads an attribute of a bound var from whichever model owns it.
AttrValue boundAttr(const TggRule& rule, const Binding& binding, const std::string& var,
                    const std::string& attr, const Model& source, const Model& target);

} // namespace rtsync::tgg
