#pragma once

#include <cstdint>
#include <set>
#include <vector>

#include "rtsync/model/model.hpp"
#include "rtsync/tgg/correspondence.hpp"
#include "rtsync/tgg/match.hpp"
#include "rtsync/tgg/rule.hpp"
#include "rtsync/tgg/search_plan.hpp"

namespace rtsync::tgg {

/// Shared machinery between batch transformation and incremental sync.
/// `out` writes the output model; `uncoveredInput` shrinks as applications
/// claim their created input-domain elements.
struct EngineContext {
    const RuleSet& rules;
    Dir dir;
    const Model& input;
    Model::Writer& out;
    CorrespondenceModel& corr;
    std::set<ElementId>& uncoveredInput;
    TouchSet& touch;
    std::size_t createdCount = 0; // output elements physically created
};

/// Realizes one admissible binding: materialized elements first, then
/// created output nodes (attributes computed from the constraints), created
/// output edges, corr nodes, and finally the application record with its
/// dependencies.
std::uint64_t applyBinding(EngineContext& ctx, const TggRule& rule, Binding binding);

/// Rule application to fixpoint: rules in (priority, name) order, anchor
/// candidates ascending, first admissible binding, passes repeated until
/// one stays quiet. pool == nullptr considers every uncovered input
/// element; otherwise anchors are restricted to pool members.
std::vector<std::uint64_t> runToFixpoint(EngineContext& ctx, const std::set<ElementId>* pool);

} // namespace rtsync::tgg
