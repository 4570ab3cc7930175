#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rtsync/model/model.hpp"
#include "rtsync/tgg/correspondence.hpp"
#include "rtsync/tgg/rule.hpp"

namespace rtsync::tgg {

struct TransformResult {
    Model output; // target model for forward, source model for backward
    CorrespondenceModel corr;
    std::vector<std::uint64_t> applications; // in application order
    std::vector<ElementId> uncovered;        // input-side elements left uncovered
    std::size_t touchedElementCount = 0;
};

/// Batch transformation to fixpoint: rules by (priority, name), anchors by
/// ascending id, first admissible match applied. The input model is only
/// read (under its shared lock).
TransformResult transformForward(const Model& source, const RuleSet& rules,
                                 const std::string& outputModelId = "target");

/// Mirror with the domains swapped. Requires a bidirectional ruleset.
TransformResult transformBackward(const Model& target, const RuleSet& rules,
                                  const std::string& outputModelId = "source");

} // namespace rtsync::tgg
