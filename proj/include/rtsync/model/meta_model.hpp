#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "rtsync/model/value.hpp"

namespace rtsync {

struct AttributeDef {
    std::string name;
    ValueKind kind = ValueKind::String;
};

struct NodeType {
    std::string name;
    std::optional<std::string> supertype;
    std::vector<AttributeDef> attributes;
    bool abstractFlag = false;
};

/// Unbounded upper multiplicity is expressed as an empty optional.
struct EdgeType {
    std::string name;
    std::string source;
    std::string target;
    bool containment = false;
    std::uint32_t lower = 0;
    std::optional<std::uint32_t> upper;
};

/// Immutable type schema for models. Construction validates all schema
/// invariants: unique type names, resolvable type references, acyclic
/// supertype chains, attribute uniqueness after flattening, lower <= upper.
class MetaModel {
public:
    MetaModel() = default;
    MetaModel(std::string name, std::vector<NodeType> nodeTypes,
              std::vector<EdgeType> edgeTypes);

    const std::string& name() const { return name_; }

    const NodeType* findNodeType(const std::string& type) const;
    const EdgeType* findEdgeType(const std::string& type) const;
    const std::map<std::string, NodeType>& nodeTypes() const { return nodeTypes_; }
    const std::map<std::string, EdgeType>& edgeTypes() const { return edgeTypes_; }

    /// Attributes of a node type with all supertype attributes folded in.
    const std::map<std::string, AttributeDef>& flatAttributes(const std::string& type) const;

    /// True if sub == super or super appears on sub's supertype chain.
    bool isSubtypeOf(const std::string& sub, const std::string& super) const;

    /// All non-abstract node types conforming to `type` (including itself).
    const std::vector<std::string>& concreteSubtypes(const std::string& type) const;

private:
    bool isSubtypeOfUnchecked(const std::string& sub, const std::string& super) const;

    std::string name_;
    std::map<std::string, NodeType> nodeTypes_;
    std::map<std::string, EdgeType> edgeTypes_;
    std::map<std::string, std::map<std::string, AttributeDef>> flatAttrs_;
    std::map<std::string, std::vector<std::string>> concrete_;
};

} // namespace rtsync
