#pragma once

#include <string>
#include <vector>

#include "rtsync/model/model.hpp"

namespace rtsync {

struct ConformanceFinding {
    ElementId element = 0;            // primary subject
    std::vector<ElementId> elements;  // all involved elements (cycles etc.)
    std::string rule;                 // stable rule code
    std::string message;
};

struct ConformanceReport {
    std::vector<ConformanceFinding> findings;
    bool ok() const { return findings.empty(); }
};

/// Full conformance pass: node/edge typing, attribute completeness and
/// kinds, containment forest, multiplicity bounds. Findings are data, not
/// errors, so deliberately broken models can be inspected.
ConformanceReport validate(const Model& model);

} // namespace rtsync
