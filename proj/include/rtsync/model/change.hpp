#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "rtsync/model/value.hpp"

namespace rtsync {

enum class ChangeKind {
    NodeCreated,
    NodeDeleted,
    EdgeCreated,
    EdgeDeleted,
    AttributeSet,
};

const char* changeKindName(ChangeKind k);

/// One journaled mutation. Creation and deletion records carry a full
/// element snapshot so a journal can be replayed onto an empty model and
/// deletions can be interpreted after the element is gone.
struct ChangeRecord {
    std::uint64_t seq = 0;
    ChangeKind kind = ChangeKind::NodeCreated;
    ElementId element = 0;
    std::string type;       // node/edge type for create/delete records
    AttributeMap attributes; // node snapshot for node create/delete
    ElementId source = 0;   // edge endpoints for edge create/delete
    ElementId target = 0;
    std::string attribute;  // attribute-set
    AttrValue oldValue;
    AttrValue newValue;
};

/// Immutable slice of a journal: all records with fromCursor < seq <= toCursor.
struct ChangeBatch {
    std::string modelId;
    std::uint64_t fromCursor = 0;
    std::uint64_t toCursor = 0;
    std::vector<ChangeRecord> records;

    bool empty() const { return records.empty(); }
};

// Mutation requests accepted by Model::applyChange.
struct CreateNode {
    std::string type;
    AttributeMap attributes;
};
struct DeleteNode {
    ElementId id = 0;
};
struct CreateEdge {
    std::string type;
    ElementId source = 0;
    ElementId target = 0;
};
struct DeleteEdge {
    ElementId id = 0;
};
struct SetAttribute {
    ElementId id = 0;
    std::string attribute;
    AttrValue value;
};

using ChangeRequest = std::variant<CreateNode, DeleteNode, CreateEdge, DeleteEdge, SetAttribute>;

} // namespace rtsync
