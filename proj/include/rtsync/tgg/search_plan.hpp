#pragma once

#include <cstddef>
#include <vector>

#include "rtsync/tgg/rule.hpp"

namespace rtsync::tgg {

enum class StepKind {
    Anchor,         // bind the anchor element (enumerate, or take the supplied one)
    ExtendOut,      // bind an edge via outgoing edges of its bound source node
    ExtendIn,       // bind an edge via incoming edges of its bound target node
    BindEndpoint,   // bind a node as an endpoint of a bound edge
    CorrFromLinked, // bind a context corr node through a bound linked element
    LinkedFromCorr, // bind a source/target element out of a bound corr node's links
};

constexpr std::size_t kNoElem = static_cast<std::size_t>(-1);

struct MatchStep {
    StepKind kind = StepKind::Anchor;
    std::size_t elem = kNoElem;   // rule element index this step binds
    std::size_t via = kNoElem;    // supporting bound element index
    bool sourceEnd = false;       // BindEndpoint: bind the edge's source end
    bool sourceSide = false;      // corr steps: use the corr node's source-side links
    bool materializable = false;  // backward: may be created with defaults when unmatched
};

/// Deterministic match recipe: one step per pattern element of the
/// direction's relevant projection (input-domain elements, context corr
/// nodes, context output-domain elements). Attribute filters are not steps.
struct SearchPlan {
    Dir dir = Dir::Forward;
    bool applicable = true; // false when the rule creates nothing on the input side
    std::vector<MatchStep> steps;
};

/// Throws ValidationError("uncoverable pattern ...") when the relevant
/// projection is disconnected.
SearchPlan buildSearchPlan(const TggRule& rule, Dir dir);

} // namespace rtsync::tgg
