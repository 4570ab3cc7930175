#include "rtsync/model/model.hpp"

#include <algorithm>

#include "rtsync/errors.hpp"

namespace rtsync {

namespace {
const std::set<ElementId> kEmptyIdSet;

std::string idStr(ElementId id) { return std::to_string(id); }
} // namespace

Model::Model(std::string id, std::shared_ptr<const MetaModel> metaModel)
    : id_(std::move(id)), metaModel_(std::move(metaModel)) {
    if (!metaModel_) throw ValidationError("model '" + id_ + "' needs a metamodel");
}

Model::Model(Model&& other) {
    std::unique_lock lock(other.mutex_);
    id_ = std::move(other.id_);
    metaModel_ = std::move(other.metaModel_);
    nodes_ = std::move(other.nodes_);
    edges_ = std::move(other.edges_);
    nextId_ = other.nextId_;
    nodesByType_ = std::move(other.nodesByType_);
    edgesByType_ = std::move(other.edgesByType_);
    out_ = std::move(other.out_);
    in_ = std::move(other.in_);
    journal_ = std::move(other.journal_);
    lastSeq_ = other.lastSeq_;
}

const Node* Model::findNode(ElementId id) const {
    auto it = nodes_.find(id);
    return it == nodes_.end() ? nullptr : &it->second;
}

const Edge* Model::findEdge(ElementId id) const {
    auto it = edges_.find(id);
    return it == edges_.end() ? nullptr : &it->second;
}

const std::set<ElementId>& Model::nodesOfType(const std::string& type) const {
    auto it = nodesByType_.find(type);
    return it == nodesByType_.end() ? kEmptyIdSet : it->second;
}

const std::set<ElementId>& Model::edgesOfType(const std::string& type) const {
    auto it = edgesByType_.find(type);
    return it == edgesByType_.end() ? kEmptyIdSet : it->second;
}

const std::set<ElementId>& Model::outEdges(ElementId node, const std::string& type) const {
    auto it = out_.find(node);
    if (it == out_.end()) return kEmptyIdSet;
    auto jt = it->second.find(type);
    return jt == it->second.end() ? kEmptyIdSet : jt->second;
}

const std::set<ElementId>& Model::inEdges(ElementId node, const std::string& type) const {
    auto it = in_.find(node);
    if (it == in_.end()) return kEmptyIdSet;
    auto jt = it->second.find(type);
    return jt == it->second.end() ? kEmptyIdSet : jt->second;
}

std::set<ElementId> Model::incidentEdges(ElementId node) const {
    std::set<ElementId> result;
    auto collect = [&](const auto& index) {
        auto it = index.find(node);
        if (it == index.end()) return;
        for (const auto& [type, ids] : it->second) result.insert(ids.begin(), ids.end());
    };
    collect(out_);
    collect(in_);
    return result;
}

ElementId Model::containmentEdgeTo(ElementId node) const {
    auto it = in_.find(node);
    if (it == in_.end()) return 0;
    for (const auto& [type, ids] : it->second) {
        const EdgeType* et = metaModel_->findEdgeType(type);
        if (et && et->containment && !ids.empty()) return *ids.begin();
    }
    return 0;
}

std::uint64_t Model::nextSeq() const {
    std::shared_lock lock(mutex_);
    return lastSeq_ + 1;
}

std::uint64_t Model::journalSize() const {
    std::shared_lock lock(mutex_);
    return journal_.size();
}

ChangeBatch Model::snapshotJournal(std::uint64_t cursor) const {
    std::shared_lock lock(mutex_);
    if (cursor > lastSeq_ + 1)
        throw ValidationError("model '" + id_ + "': snapshot cursor " + idStr(cursor) +
                              " beyond journal end " + idStr(lastSeq_));
    ChangeBatch batch;
    batch.modelId = id_;
    batch.fromCursor = cursor;
    batch.toCursor = lastSeq_;
    for (const ChangeRecord& r : journal_) {
        if (r.seq > cursor) batch.records.push_back(r);
    }
    return batch;
}

Model::Writer::Writer(Model& m) : model_(m), lock_(m.mutex_), baseSeq_(m.lastSeq_) {}

ChangeRecord Model::Writer::apply(const ChangeRequest& request) {
    return model_.applyLocked(request);
}

ChangeRecord Model::applyChange(const ChangeRequest& request) {
    Writer w(*this);
    return w.apply(request);
}

ChangeRecord Model::applyLocked(const ChangeRequest& request) {
    return std::visit(
        [this](const auto& req) -> ChangeRecord {
            using T = std::decay_t<decltype(req)>;
            if constexpr (std::is_same_v<T, CreateNode>) return doCreateNode(req);
            else if constexpr (std::is_same_v<T, DeleteNode>) return doDeleteNode(req.id);
            else if constexpr (std::is_same_v<T, CreateEdge>) return doCreateEdge(req);
            else if constexpr (std::is_same_v<T, DeleteEdge>) return doDeleteEdge(req.id);
            else return doSetAttribute(req);
        },
        request);
}

ElementId Model::takeId() { return nextId_++; }

ChangeRecord Model::doCreateNode(const CreateNode& req) {
    const NodeType* nt = metaModel_->findNodeType(req.type);
    if (!nt)
        throw ValidationError("create-node: unknown node type '" + req.type + "'");
    if (nt->abstractFlag)
        throw ValidationError("create-node: node type '" + req.type + "' is abstract");
    const auto& flat = metaModel_->flatAttributes(req.type);
    for (const auto& [name, value] : req.attributes) {
        auto it = flat.find(name);
        if (it == flat.end())
            throw ValidationError("create-node: unknown attribute '" + name + "' for type '" +
                                  req.type + "'");
        if (kindOf(value) != it->second.kind)
            throw ValidationError("create-node: attribute '" + name + "' expects " +
                                  kindName(it->second.kind) + ", got " + kindName(kindOf(value)));
    }
    for (const auto& [name, def] : flat) {
        if (!req.attributes.count(name))
            throw ValidationError("create-node: missing attribute '" + name + "' for type '" +
                                  req.type + "'");
    }

    Node node{takeId(), req.type, req.attributes};
    ChangeRecord rec;
    rec.seq = ++lastSeq_;
    rec.kind = ChangeKind::NodeCreated;
    rec.element = node.id;
    rec.type = node.type;
    rec.attributes = node.attributes;
    nodesByType_[node.type].insert(node.id);
    nodes_.emplace(node.id, std::move(node));
    journal_.push_back(rec);
    return rec;
}

ChangeRecord Model::doDeleteNode(ElementId id) {
    auto it = nodes_.find(id);
    if (it == nodes_.end())
        throw ValidationError("delete-node: unknown element id " + idStr(id));

    // Contained subtree first (children ascending), then remaining incident
    // edges, then the node itself. Every step is its own journal record.
    std::set<ElementId> children;
    auto oit = out_.find(id);
    if (oit != out_.end()) {
        for (const auto& [type, edgeIds] : oit->second) {
            const EdgeType* et = metaModel_->findEdgeType(type);
            if (!et || !et->containment) continue;
            for (ElementId eid : edgeIds) children.insert(edges_.at(eid).target);
        }
    }
    for (ElementId child : children) {
        if (nodes_.count(child)) doDeleteNode(child);
    }

    for (ElementId eid : incidentEdges(id)) {
        if (edges_.count(eid)) doDeleteEdge(eid);
    }

    Node snapshot = nodes_.at(id);
    ChangeRecord rec;
    rec.seq = ++lastSeq_;
    rec.kind = ChangeKind::NodeDeleted;
    rec.element = id;
    rec.type = snapshot.type;
    rec.attributes = snapshot.attributes;
    nodesByType_[snapshot.type].erase(id);
    nodes_.erase(id);
    journal_.push_back(rec);
    return rec;
}

ChangeRecord Model::doCreateEdge(const CreateEdge& req) {
    const EdgeType* et = metaModel_->findEdgeType(req.type);
    if (!et)
        throw ValidationError("create-edge: unknown edge type '" + req.type + "'");
    const Node* src = findNode(req.source);
    const Node* dst = findNode(req.target);
    if (!src)
        throw ValidationError("create-edge: unknown source node " + idStr(req.source));
    if (!dst)
        throw ValidationError("create-edge: unknown target node " + idStr(req.target));
    if (!metaModel_->isSubtypeOf(src->type, et->source))
        throw ValidationError("create-edge '" + req.type + "': source node " + idStr(src->id) +
                              " of type '" + src->type + "' does not conform to '" + et->source + "'");
    if (!metaModel_->isSubtypeOf(dst->type, et->target))
        throw ValidationError("create-edge '" + req.type + "': target node " + idStr(dst->id) +
                              " of type '" + dst->type + "' does not conform to '" + et->target + "'");
    if (et->upper && outEdges(req.source, req.type).size() >= *et->upper)
        throw ValidationError("create-edge '" + req.type + "': upper bound " +
                              std::to_string(*et->upper) + " exceeded at node " + idStr(req.source));
    if (et->containment) {
        if (containmentEdgeTo(req.target) != 0)
            throw ValidationError("create-edge '" + req.type + "': node " + idStr(req.target) +
                                  " already has a container");
        // Walk up from the new container; reaching the target means a cycle.
        ElementId cur = req.source;
        while (cur != 0) {
            if (cur == req.target)
                throw ValidationError("create-edge '" + req.type +
                                      "': containment cycle through node " + idStr(req.target));
            ElementId up = containmentEdgeTo(cur);
            cur = up == 0 ? 0 : edges_.at(up).source;
        }
    }

    Edge edge{takeId(), req.type, req.source, req.target};
    ChangeRecord rec;
    rec.seq = ++lastSeq_;
    rec.kind = ChangeKind::EdgeCreated;
    rec.element = edge.id;
    rec.type = edge.type;
    rec.source = edge.source;
    rec.target = edge.target;
    indexEdge(edge);
    edges_.emplace(edge.id, std::move(edge));
    journal_.push_back(rec);
    return rec;
}

ChangeRecord Model::doDeleteEdge(ElementId id) {
    auto it = edges_.find(id);
    if (it == edges_.end())
        throw ValidationError("delete-edge: unknown element id " + idStr(id));
    Edge snapshot = it->second;
    ChangeRecord rec;
    rec.seq = ++lastSeq_;
    rec.kind = ChangeKind::EdgeDeleted;
    rec.element = id;
    rec.type = snapshot.type;
    rec.source = snapshot.source;
    rec.target = snapshot.target;
    unindexEdge(snapshot);
    edges_.erase(it);
    journal_.push_back(rec);
    return rec;
}

ChangeRecord Model::doSetAttribute(const SetAttribute& req) {
    auto it = nodes_.find(req.id);
    if (it == nodes_.end())
        throw ValidationError("set-attribute: unknown element id " + idStr(req.id));
    Node& node = it->second;
    const auto& flat = metaModel_->flatAttributes(node.type);
    auto at = flat.find(req.attribute);
    if (at == flat.end())
        throw ValidationError("set-attribute: unknown attribute '" + req.attribute +
                              "' for type '" + node.type + "'");
    if (kindOf(req.value) != at->second.kind)
        throw ValidationError("set-attribute: attribute '" + req.attribute + "' expects " +
                              kindName(at->second.kind) + ", got " + kindName(kindOf(req.value)));

    ChangeRecord rec;
    rec.seq = ++lastSeq_;
    rec.kind = ChangeKind::AttributeSet;
    rec.element = req.id;
    rec.attribute = req.attribute;
    rec.oldValue = node.attributes.at(req.attribute);
    rec.newValue = req.value;
    node.attributes[req.attribute] = req.value;
    journal_.push_back(rec);
    return rec;
}

void Model::indexEdge(const Edge& e) {
    edgesByType_[e.type].insert(e.id);
    out_[e.source][e.type].insert(e.id);
    in_[e.target][e.type].insert(e.id);
}

void Model::unindexEdge(const Edge& e) {
    edgesByType_[e.type].erase(e.id);
    out_[e.source][e.type].erase(e.id);
    in_[e.target][e.type].erase(e.id);
}

void Model::insertNodeRaw(Node node) {
    if (nodes_.count(node.id) || edges_.count(node.id))
        throw ValidationError("duplicate element id " + idStr(node.id));
    nextId_ = std::max(nextId_, node.id + 1);
    nodesByType_[node.type].insert(node.id);
    nodes_.emplace(node.id, std::move(node));
}

void Model::insertEdgeRaw(Edge edge) {
    if (nodes_.count(edge.id) || edges_.count(edge.id))
        throw ValidationError("duplicate element id " + idStr(edge.id));
    nextId_ = std::max(nextId_, edge.id + 1);
    indexEdge(edge);
    edges_.emplace(edge.id, std::move(edge));
}

void Model::removeNodeRaw(ElementId id) {
    auto it = nodes_.find(id);
    if (it == nodes_.end()) return;
    nodesByType_[it->second.type].erase(id);
    nodes_.erase(it);
}

void Model::removeEdgeRaw(ElementId id) {
    auto it = edges_.find(id);
    if (it == edges_.end()) return;
    unindexEdge(it->second);
    edges_.erase(it);
}

void Model::applyRecordRaw(const ChangeRecord& record) {
    switch (record.kind) {
    case ChangeKind::NodeCreated:
        insertNodeRaw(Node{record.element, record.type, record.attributes});
        break;
    case ChangeKind::NodeDeleted:
        removeNodeRaw(record.element);
        break;
    case ChangeKind::EdgeCreated:
        insertEdgeRaw(Edge{record.element, record.type, record.source, record.target});
        break;
    case ChangeKind::EdgeDeleted:
        removeEdgeRaw(record.element);
        break;
    case ChangeKind::AttributeSet: {
        auto it = nodes_.find(record.element);
        if (it == nodes_.end())
            throw ValidationError("replay: attribute-set on unknown node " + idStr(record.element));
        it->second.attributes[record.attribute] = record.newValue;
        break;
    }
    }
    journal_.push_back(record);
    lastSeq_ = std::max(lastSeq_, record.seq);
}

} // namespace rtsync
