#include "rtsync/model/meta_model.hpp"

#include <algorithm>

#include "rtsync/errors.hpp"

namespace rtsync {

MetaModel::MetaModel(std::string name, std::vector<NodeType> nodeTypes,
                     std::vector<EdgeType> edgeTypes)
    : name_(std::move(name)) {
    for (auto& nt : nodeTypes) {
        if (!nodeTypes_.emplace(nt.name, nt).second)
            throw ValidationError("metamodel '" + name_ + "': duplicate node type '" + nt.name + "'");
    }
    for (auto& et : edgeTypes) {
        if (!edgeTypes_.emplace(et.name, et).second)
            throw ValidationError("metamodel '" + name_ + "': duplicate edge type '" + et.name + "'");
    }

    for (const auto& [tn, nt] : nodeTypes_) {
        if (nt.supertype && !nodeTypes_.count(*nt.supertype))
            throw ValidationError("node type '" + tn + "' references unknown supertype '" +
                                  *nt.supertype + "'");
    }
    for (const auto& [en, et] : edgeTypes_) {
        if (!nodeTypes_.count(et.source))
            throw ValidationError("edge type '" + en + "' references unknown source type '" +
                                  et.source + "'");
        if (!nodeTypes_.count(et.target))
            throw ValidationError("edge type '" + en + "' references unknown target type '" +
                                  et.target + "'");
        if (et.upper && et.lower > *et.upper)
            throw ValidationError("edge type '" + en + "' has lower bound above upper bound");
    }

    // Supertype chains must be acyclic; flatten attributes along the way.
    for (const auto& [tn, nt] : nodeTypes_) {
        std::vector<const NodeType*> chain;
        const NodeType* cur = &nt;
        while (true) {
            for (const NodeType* seen : chain) {
                if (seen == cur)
                    throw ValidationError("supertype cycle involving node type '" + tn + "'");
            }
            chain.push_back(cur);
            if (!cur->supertype) break;
            cur = &nodeTypes_.at(*cur->supertype);
            if (chain.size() > nodeTypes_.size())
                throw ValidationError("supertype cycle involving node type '" + tn + "'");
        }
        std::map<std::string, AttributeDef> flat;
        for (auto it = chain.rbegin(); it != chain.rend(); ++it) {
            for (const auto& attr : (*it)->attributes) {
                if (!flat.emplace(attr.name, attr).second)
                    throw ValidationError("node type '" + tn + "': duplicate attribute '" +
                                          attr.name + "' after supertype flattening");
            }
        }
        flatAttrs_.emplace(tn, std::move(flat));
    }

    for (const auto& [tn, nt] : nodeTypes_) {
        std::vector<std::string> concrete;
        for (const auto& [cn, ct] : nodeTypes_) {
            if (!ct.abstractFlag && isSubtypeOfUnchecked(cn, tn)) concrete.push_back(cn);
        }
        concrete_.emplace(tn, std::move(concrete));
    }
}

bool MetaModel::isSubtypeOfUnchecked(const std::string& sub, const std::string& super) const {
    const NodeType* cur = &nodeTypes_.at(sub);
    std::size_t hops = 0;
    while (true) {
        if (cur->name == super) return true;
        if (!cur->supertype || ++hops > nodeTypes_.size()) return false;
        cur = &nodeTypes_.at(*cur->supertype);
    }
}

const NodeType* MetaModel::findNodeType(const std::string& type) const {
    auto it = nodeTypes_.find(type);
    return it == nodeTypes_.end() ? nullptr : &it->second;
}

const EdgeType* MetaModel::findEdgeType(const std::string& type) const {
    auto it = edgeTypes_.find(type);
    return it == edgeTypes_.end() ? nullptr : &it->second;
}

const std::map<std::string, AttributeDef>&
MetaModel::flatAttributes(const std::string& type) const {
    auto it = flatAttrs_.find(type);
    if (it == flatAttrs_.end())
        throw ValidationError("unknown node type '" + type + "'");
    return it->second;
}

bool MetaModel::isSubtypeOf(const std::string& sub, const std::string& super) const {
    if (!nodeTypes_.count(sub) || !nodeTypes_.count(super)) return false;
    return isSubtypeOfUnchecked(sub, super);
}

const std::vector<std::string>& MetaModel::concreteSubtypes(const std::string& type) const {
    auto it = concrete_.find(type);
    if (it == concrete_.end())
        throw ValidationError("unknown node type '" + type + "'");
    return it->second;
}

} // namespace rtsync
