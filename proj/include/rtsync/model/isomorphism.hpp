#pragma once

#include <map>
#include <optional>

#include "rtsync/model/model.hpp"

namespace rtsync {

/// Node and edge bijections from the left model onto the right one.
struct IsomorphismWitness {
    std::map<ElementId, ElementId> nodeMap;
    std::map<ElementId, ElementId> edgeMap;
};

struct IsomorphismResult {
    bool isomorphic = false;
    std::optional<IsomorphismWitness> witness;
};

/// Content equivalence: a bijection of nodes and edges preserving types,
/// endpoints and attribute values. Element ids are never compared. Both
/// models must conform to the same metamodel (by name), otherwise a
/// ValidationError is thrown.
///
/// Backtracking search over signature-partitioned candidates; intended for
/// test fixtures and desk-scale models.
IsomorphismResult isomorphic(const Model& a, const Model& b);

/// Independently re-checks that a witness is a valid bijection between the
/// two models. Used by tests to audit returned witnesses.
bool verifyWitness(const Model& a, const Model& b, const IsomorphismWitness& w);

} // namespace rtsync
