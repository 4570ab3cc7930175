#include "rtsync/sim/effectors.hpp"

#include <json.hpp>

#include <algorithm>
#include <map>

namespace rtsync::sim {

namespace {

bool isBeanType(const std::string& t) {
    return t == "SessionBean" || t == "MessageDrivenBean";
}

struct BatchIndex {
    std::map<ElementId, const ChangeRecord*> deletedNodes;
    std::map<ElementId, const ChangeRecord*> deletedEdges;

    bool nodeGone(ElementId id) const { return deletedNodes.count(id) > 0; }
};

/// Name attribute of a node that is either still live or journaled as
/// deleted in this batch; empty if neither resolves.
std::string nodeName(const Model& m, const BatchIndex& bx, ElementId id) {
    const AttributeMap* attrs = nullptr;
    if (const Node* n = m.findNode(id)) {
        attrs = &n->attributes;
    } else if (auto it = bx.deletedNodes.find(id); it != bx.deletedNodes.end()) {
        attrs = &it->second->attributes;
    }
    if (!attrs) return {};
    auto it = attrs->find("name");
    if (it == attrs->end() || !std::holds_alternative<std::string>(it->second)) return {};
    return std::get<std::string>(it->second);
}

/// Source endpoint of the unique live-or-deleted edge of `type` pointing at
/// `target`; 0 when there is none.
ElementId edgeSourceTo(const Model& m, const BatchIndex& bx, const std::string& type,
                       ElementId target) {
    for (ElementId e : m.inEdges(target, type)) return m.findEdge(e)->source;
    for (const auto& [id, rec] : bx.deletedEdges)
        if (rec->type == type && rec->target == target) return rec->source;
    return 0;
}

ElementId ownerOfInterface(const Model& m, const BatchIndex& bx, ElementId iface) {
    if (ElementId b = edgeSourceTo(m, bx, "requiresInterface", iface)) return b;
    return edgeSourceTo(m, bx, "providesInterface", iface);
}

} // namespace

EffectorReport applyEffector(Runtime& rt, const Model& source, const ChangeBatch& batch) {
    EffectorReport rep;
    BatchIndex bx;
    for (const auto& r : batch.records) {
        if (r.kind == ChangeKind::NodeDeleted) bx.deletedNodes[r.element] = &r;
        if (r.kind == ChangeKind::EdgeDeleted) bx.deletedEdges[r.element] = &r;
    }

    auto push = [&](const ChangeRecord& r, std::string action, std::string status,
                    std::string detail) {
        if (status == "applied")
            ++rep.applied;
        else if (status == "rejected")
            ++rep.rejected;
        else if (status == "stale")
            ++rep.stale;
        else
            ++rep.ignored;
        rep.entries.push_back(
            EffectorEntry{r.seq, std::move(action), std::move(status), std::move(detail)});
    };

    for (const auto& r : batch.records) {
        switch (r.kind) {
        case ChangeKind::AttributeSet: {
            if (r.attribute == "callCount" || r.attribute == "totalTimeMs" ||
                r.attribute == "atMs" || r.attribute == "typeName")
                push(r, "attribute", "rejected", "sensor-only attribute");
            else
                push(r, "attribute", "rejected", "unsupported");
            break;
        }
        case ChangeKind::NodeCreated: {
            push(r, "structure", "rejected", "unsupported");
            break;
        }
        case ChangeKind::EdgeCreated: {
            if (r.type != "wire") {
                push(r, "structure", "rejected", "unsupported");
                break;
            }
            const Node* inode = source.findNode(r.source);
            const Node* pnode = source.findNode(r.target);
            if (!inode || !pnode) {
                push(r, "wire", "stale", "endpoint vanished");
                break;
            }
            std::string iface = std::get<std::string>(inode->attributes.at("name"));
            const auto& req = source.inEdges(r.source, "requiresInterface");
            if (req.size() != 1) {
                push(r, "wire", "stale", "requiring bean not found");
                break;
            }
            std::string ownerName = nodeName(source, bx, source.findEdge(*req.begin())->source);
            std::string provName = std::get<std::string>(pnode->attributes.at("name"));
            const BeanState* ob = rt.findBeanByName(ownerName);
            const BeanState* pb = rt.findBeanByName(provName);
            if (!ob || !pb) {
                push(r, "wire", "stale", "unknown bean");
                break;
            }
            auto cur = ob->wires.find(iface);
            if (cur != ob->wires.end()) {
                const BeanState* curProv = rt.findBean(cur->second);
                if (curProv && curProv->name == provName)
                    push(r, "wire", "applied", "already in effect");
                else
                    push(r, "wire", "stale", "wired elsewhere");
                break;
            }
            if (std::find(ob->required.begin(), ob->required.end(), iface) ==
                    ob->required.end() ||
                std::find(pb->provided.begin(), pb->provided.end(), iface) ==
                    pb->provided.end()) {
                push(r, "wire", "stale", "interface not declared");
                break;
            }
            rt.wireByName(ownerName, iface, provName);
            push(r, "wire", "applied", ownerName + "." + iface + " -> " + provName);
            break;
        }
        case ChangeKind::EdgeDeleted: {
            if (r.type != "wire") {
                bool sub = bx.nodeGone(r.source) || bx.nodeGone(r.target);
                if (sub)
                    push(r, "structure", "ignored", "cascade of a deletion");
                else
                    push(r, "structure", "rejected", "unsupported");
                break;
            }
            ElementId ownerId = ownerOfInterface(source, bx, r.source);
            std::string iface = nodeName(source, bx, r.source);
            if (!ownerId || iface.empty()) {
                push(r, "unwire", "stale", "cannot resolve wire");
                break;
            }
            if ((bx.nodeGone(ownerId) && isBeanType(bx.deletedNodes.at(ownerId)->type)) ||
                (bx.nodeGone(r.target) && isBeanType(bx.deletedNodes.at(r.target)->type))) {
                push(r, "unwire", "ignored", "cascade of a bean removal");
                break;
            }
            std::string ownerName = nodeName(source, bx, ownerId);
            const BeanState* ob = rt.findBeanByName(ownerName);
            if (!ob) {
                push(r, "unwire", "stale", "unknown bean '" + ownerName + "'");
                break;
            }
            if (!ob->wires.count(iface)) {
                push(r, "unwire", "stale", "not wired");
                break;
            }
            rt.unwireByName(ownerName, iface);
            push(r, "unwire", "applied", ownerName + "." + iface);
            break;
        }
        case ChangeKind::NodeDeleted: {
            const std::string& t = r.type;
            if (isBeanType(t)) {
                ElementId mod = edgeSourceTo(source, bx, "containsBean", r.element);
                if (mod && bx.nodeGone(mod)) {
                    push(r, "remove-bean", "ignored", "cascade of a module removal");
                    break;
                }
                auto nameIt = r.attributes.find("name");
                std::string name = nameIt == r.attributes.end()
                                       ? std::string()
                                       : std::get<std::string>(nameIt->second);
                if (!rt.findBeanByName(name)) {
                    push(r, "remove-bean", "stale", "unknown bean '" + name + "'");
                    break;
                }
                rt.removeBeanByName(name);
                push(r, "remove-bean", "applied", name);
            } else if (t == "EjbModule") {
                ElementId cont = edgeSourceTo(source, bx, "containsModule", r.element);
                if (cont && bx.nodeGone(cont)) {
                    push(r, "undeploy", "ignored", "cascade of a container removal");
                    break;
                }
                auto nameIt = r.attributes.find("name");
                std::string name = nameIt == r.attributes.end()
                                       ? std::string()
                                       : std::get<std::string>(nameIt->second);
                if (!rt.findModuleByName(name)) {
                    push(r, "undeploy", "stale", "unknown module '" + name + "'");
                    break;
                }
                rt.undeployByName(name);
                push(r, "undeploy", "applied", name);
            } else if (t == "Interface" || t == "ExceptionRecord") {
                ElementId owner = t == "Interface"
                                      ? ownerOfInterface(source, bx, r.element)
                                      : edgeSourceTo(source, bx, "recordsException", r.element);
                if (owner && bx.nodeGone(owner))
                    push(r, "structure", "ignored", "cascade of a bean removal");
                else
                    push(r, "structure", "rejected", "unsupported");
            } else {
                push(r, "structure", "rejected", "unsupported");
            }
            break;
        }
        }
    }
    return rep;
}

std::string effectorReportJson(const EffectorReport& report) {
    nlohmann::json entries = nlohmann::json::array();
    for (const auto& e : report.entries)
        entries.push_back({{"action", e.action},
                           {"detail", e.detail},
                           {"seq", e.seq},
                           {"status", e.status}});
    nlohmann::json j{{"applied", report.applied},
                     {"entries", entries},
                     {"ignored", report.ignored},
                     {"rejected", report.rejected},
                     {"stale", report.stale}};
    return j.dump(2) + "\n";
}

} // namespace rtsync::sim
