#include "rtsync/sim/sensors.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "rtsync/errors.hpp"

namespace rtsync::sim {

namespace {

std::string attrString(const Node* n, const std::string& key) {
    return std::get<std::string>(n->attributes.at(key));
}
std::int64_t attrInt(const Node* n, const std::string& key) {
    return std::get<std::int64_t>(n->attributes.at(key));
}

struct BeanIndex {
    ElementId node = 0;
    const Node* data = nullptr;
    std::map<std::string, ElementId> provided; // iface name -> interface node
    std::map<std::string, ElementId> required;
    // (typeName, atMs) -> record node; multimap because duplicates are legal
    std::multimap<std::pair<std::string, std::int64_t>, ElementId> records;
};

struct ModuleIndex {
    ElementId node = 0;
    std::map<std::string, BeanIndex> beans; // by bean name
};

struct Index {
    std::map<std::string, ElementId> containers; // by name
    std::map<std::string, ModuleIndex> modules;  // by name, under the main container
};

Index indexModel(const Model& m, const std::string& mainContainer) {
    Index ix;
    for (ElementId cid : m.nodesOfType("Container"))
        ix.containers[attrString(m.findNode(cid), "name")] = cid;
    auto main = ix.containers.find(mainContainer);
    if (main == ix.containers.end()) return ix;
    for (ElementId cm : m.outEdges(main->second, "containsModule")) {
        ElementId mid = m.findEdge(cm)->target;
        ModuleIndex mx;
        mx.node = mid;
        for (ElementId mb : m.outEdges(mid, "containsBean")) {
            ElementId bid = m.findEdge(mb)->target;
            const Node* bn = m.findNode(bid);
            BeanIndex bx;
            bx.node = bid;
            bx.data = bn;
            for (ElementId pe : m.outEdges(bid, "providesInterface")) {
                ElementId iid = m.findEdge(pe)->target;
                bx.provided[attrString(m.findNode(iid), "name")] = iid;
            }
            for (ElementId re : m.outEdges(bid, "requiresInterface")) {
                ElementId iid = m.findEdge(re)->target;
                bx.required[attrString(m.findNode(iid), "name")] = iid;
            }
            for (ElementId xe : m.outEdges(bid, "recordsException")) {
                ElementId xid = m.findEdge(xe)->target;
                const Node* xn = m.findNode(xid);
                bx.records.insert({{attrString(xn, "typeName"), attrInt(xn, "atMs")}, xid});
            }
            mx.beans[attrString(bn, "name")] = std::move(bx);
        }
        ix.modules[attrString(m.findNode(mid), "name")] = std::move(mx);
    }
    return ix;
}

std::string beanNodeType(const std::string& kind) {
    return kind == "message-driven" ? "MessageDrivenBean" : "SessionBean";
}

} // namespace

ChangeBatch pumpSensors(const Runtime& rt, Model& source) {
    if (source.metaModel().name() != "ejb-source")
        throw ValidationError("pumpSensors: model must conform to ejb-source");
    const std::uint64_t before = source.nextSeq() - 1;
    const ContainerState& cs = rt.containers().front();

    Index ix = indexModel(source, cs.id);

    // model-side bean node ids by runtime bean name, filled as we go
    std::map<std::string, ElementId> beanNode;
    // required interface node per (bean name, iface name)
    std::map<std::pair<std::string, std::string>, ElementId> requiredNode;

    // containers: the runtime owns exactly one; anything else is stale
    ElementId containerNode;
    auto cfound = ix.containers.find(cs.id);
    if (cfound != ix.containers.end()) {
        containerNode = cfound->second;
    } else {
        containerNode =
            source.applyChange(CreateNode{"Container", {{"name", cs.id}}}).element;
    }
    for (const auto& [name, id] : ix.containers)
        if (name != cs.id) source.applyChange(DeleteNode{id});

    // stale modules go first so their names free up
    std::set<std::string> liveModules;
    for (const auto& ms : cs.modules) liveModules.insert(ms.name);
    for (const auto& [name, mx] : ix.modules)
        if (!liveModules.count(name)) source.applyChange(DeleteNode{mx.node});

    auto createBean = [&](ElementId moduleNode, const BeanState& bs) {
        ElementId bnode = source
                              .applyChange(CreateNode{beanNodeType(bs.kind),
                                                      {{"name", bs.name},
                                                       {"kind", bs.kind},
                                                       {"callCount", bs.callCount},
                                                       {"totalTimeMs", bs.totalTimeMs}}})
                              .element;
        source.applyChange(CreateEdge{"containsBean", moduleNode, bnode});
        beanNode[bs.name] = bnode;
        for (const auto& iface : bs.provided) {
            ElementId inode =
                source.applyChange(CreateNode{"Interface", {{"name", iface}}}).element;
            source.applyChange(CreateEdge{"providesInterface", bnode, inode});
        }
        for (const auto& iface : bs.required) {
            ElementId inode =
                source.applyChange(CreateNode{"Interface", {{"name", iface}}}).element;
            source.applyChange(CreateEdge{"requiresInterface", bnode, inode});
            requiredNode[{bs.name, iface}] = inode;
        }
        for (const auto& [typeName, atMs] : bs.exceptions) {
            ElementId xnode = source
                                  .applyChange(CreateNode{"ExceptionRecord",
                                                          {{"typeName", typeName},
                                                           {"atMs", atMs}}})
                                  .element;
            source.applyChange(CreateEdge{"recordsException", bnode, xnode});
        }
    };

    auto reconcileBean = [&](BeanIndex& bx, const BeanState& bs) {
        beanNode[bs.name] = bx.node;
        if (attrString(bx.data, "kind") != bs.kind)
            source.applyChange(SetAttribute{bx.node, "kind", bs.kind});
        if (attrInt(bx.data, "callCount") != bs.callCount)
            source.applyChange(SetAttribute{bx.node, "callCount", bs.callCount});
        if (attrInt(bx.data, "totalTimeMs") != bs.totalTimeMs)
            source.applyChange(SetAttribute{bx.node, "totalTimeMs", bs.totalTimeMs});

        // declared interfaces are fixed for a bean's lifetime; anything
        // missing here was taken away by an unsupported backward edit
        for (const auto& iface : bs.provided) {
            if (bx.provided.count(iface)) continue;
            ElementId inode =
                source.applyChange(CreateNode{"Interface", {{"name", iface}}}).element;
            source.applyChange(CreateEdge{"providesInterface", bx.node, inode});
        }
        for (const auto& [iface, inode] : bx.provided)
            if (std::find(bs.provided.begin(), bs.provided.end(), iface) == bs.provided.end())
                source.applyChange(DeleteNode{inode});
        for (const auto& iface : bs.required) {
            auto it = bx.required.find(iface);
            if (it != bx.required.end()) {
                requiredNode[{bs.name, iface}] = it->second;
                continue;
            }
            ElementId inode =
                source.applyChange(CreateNode{"Interface", {{"name", iface}}}).element;
            source.applyChange(CreateEdge{"requiresInterface", bx.node, inode});
            requiredNode[{bs.name, iface}] = inode;
        }
        for (const auto& [iface, inode] : bx.required)
            if (std::find(bs.required.begin(), bs.required.end(), iface) == bs.required.end())
                source.applyChange(DeleteNode{inode});

        // exception history: append-only on the runtime side, so diff the
        // multisets and materialize whatever the model is missing
        auto pending = bx.records;
        for (const auto& [typeName, atMs] : bs.exceptions) {
            auto hit = pending.find({typeName, atMs});
            if (hit != pending.end()) {
                pending.erase(hit);
                continue;
            }
            ElementId xnode =
                source
                    .applyChange(CreateNode{"ExceptionRecord",
                                            {{"typeName", typeName}, {"atMs", atMs}}})
                    .element;
            source.applyChange(CreateEdge{"recordsException", bx.node, xnode});
        }
        for (const auto& [key, xid] : pending) source.applyChange(DeleteNode{xid});
    };

    for (const auto& ms : cs.modules) {
        auto mfound = ix.modules.find(ms.name);
        if (mfound == ix.modules.end()) {
            ElementId mnode =
                source.applyChange(CreateNode{"EjbModule", {{"name", ms.name}}}).element;
            source.applyChange(CreateEdge{"containsModule", containerNode, mnode});
            for (const auto& bs : ms.beans) createBean(mnode, bs);
            continue;
        }
        ModuleIndex& mx = mfound->second;
        std::set<std::string> liveBeans;
        for (const auto& bs : ms.beans) liveBeans.insert(bs.name);
        for (const auto& [name, bx] : mx.beans)
            if (!liveBeans.count(name)) source.applyChange(DeleteNode{bx.node});
        for (const auto& bs : ms.beans) {
            auto bfound = mx.beans.find(bs.name);
            if (bfound == mx.beans.end())
                createBean(mx.node, bs);
            else
                reconcileBean(bfound->second, bs);
        }
    }

    // wires: re-read current edges, the structural passes above may have
    // cascaded some of the indexed ones away
    for (const auto& ms : cs.modules) {
        for (const auto& bs : ms.beans) {
            for (const auto& iface : bs.required) {
                ElementId inode = requiredNode.at({bs.name, iface});
                const BeanState* prov = nullptr;
                auto wired = bs.wires.find(iface);
                if (wired != bs.wires.end()) prov = rt.findBean(wired->second);
                ElementId want = prov ? beanNode.at(prov->name) : 0;
                ElementId haveEdge = 0, haveTarget = 0;
                for (ElementId we : source.outEdges(inode, "wire")) {
                    haveEdge = we;
                    haveTarget = source.findEdge(we)->target;
                }
                if (haveTarget == want) continue;
                if (haveEdge) source.applyChange(DeleteEdge{haveEdge});
                if (want) source.applyChange(CreateEdge{"wire", inode, want});
            }
        }
    }

    return source.snapshotJournal(before);
}

Model runtimeModel(const Runtime& runtime, std::shared_ptr<const MetaModel> meta,
                   const std::string& modelId) {
    Model m(modelId, std::move(meta));
    pumpSensors(runtime, m);
    return m;
}

} // namespace rtsync::sim
