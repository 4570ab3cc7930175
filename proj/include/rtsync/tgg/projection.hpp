#pragma once

#include "rtsync/model/model.hpp"
#include "rtsync/tgg/correspondence.hpp"
#include "rtsync/tgg/rule.hpp"

namespace rtsync::tgg {

/// Projection of one triple side onto its corr-mapped subgraph: elements
/// linked by some corr node, edges only when both endpoints survive, and
/// only the attributes related by a bidirectional copy constraint of the
/// owning rule. This is the round-trip comparison domain: backward
/// materialization defaults and forward-only attributes fall outside it.
Model projectMapped(const Model& model, const CorrespondenceModel& corr, const RuleSet& rules,
                    Domain side);

} // namespace rtsync::tgg
