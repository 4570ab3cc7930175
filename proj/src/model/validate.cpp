#include "rtsync/model/validate.hpp"

#include <algorithm>
#include <functional>

namespace rtsync {

namespace {

void add(ConformanceReport& report, ElementId element, std::string rule, std::string message,
         std::vector<ElementId> all = {}) {
    ConformanceFinding f;
    f.element = element;
    f.elements = all.empty() ? std::vector<ElementId>{element} : std::move(all);
    f.rule = std::move(rule);
    f.message = std::move(message);
    report.findings.push_back(std::move(f));
}

} // namespace

ConformanceReport validate(const Model& model) {
    ConformanceReport report;
    const MetaModel& mm = model.metaModel();

    for (const auto& [id, node] : model.nodes()) {
        const NodeType* nt = mm.findNodeType(node.type);
        if (!nt) {
            add(report, id, "unknown-node-type", "node " + std::to_string(id) +
                " has unknown type '" + node.type + "'");
            continue;
        }
        if (nt->abstractFlag)
            add(report, id, "abstract-node-type", "node " + std::to_string(id) +
                " instantiates abstract type '" + node.type + "'");
        const auto& flat = mm.flatAttributes(node.type);
        for (const auto& [name, def] : flat) {
            auto it = node.attributes.find(name);
            if (it == node.attributes.end()) {
                add(report, id, "missing-attribute",
                    "node " + std::to_string(id) + " misses attribute '" + name + "'");
            } else if (kindOf(it->second) != def.kind) {
                add(report, id, "attribute-kind",
                    "node " + std::to_string(id) + " attribute '" + name + "' has kind " +
                        kindName(kindOf(it->second)) + ", expected " + kindName(def.kind));
            }
        }
        for (const auto& [name, value] : node.attributes) {
            if (!flat.count(name))
                add(report, id, "unknown-attribute",
                    "node " + std::to_string(id) + " carries undeclared attribute '" + name + "'");
        }
    }

    for (const auto& [id, edge] : model.edges()) {
        const EdgeType* et = mm.findEdgeType(edge.type);
        if (!et) {
            add(report, id, "unknown-edge-type", "edge " + std::to_string(id) +
                " has unknown type '" + edge.type + "'");
            continue;
        }
        const Node* src = model.findNode(edge.source);
        const Node* dst = model.findNode(edge.target);
        if (!src || !dst) {
            add(report, id, "dangling-endpoint",
                "edge " + std::to_string(id) + " references a missing endpoint");
            continue;
        }
        if (!mm.isSubtypeOf(src->type, et->source))
            add(report, id, "endpoint-type",
                "edge " + std::to_string(id) + " source type '" + src->type +
                    "' does not conform to '" + et->source + "'");
        if (!mm.isSubtypeOf(dst->type, et->target))
            add(report, id, "endpoint-type",
                "edge " + std::to_string(id) + " target type '" + dst->type +
                    "' does not conform to '" + et->target + "'");
    }

    // Multiplicity bounds per (node, edge type) on outgoing edges.
    for (const auto& [id, node] : model.nodes()) {
        const NodeType* nt = mm.findNodeType(node.type);
        if (!nt) continue;
        for (const auto& [etName, et] : mm.edgeTypes()) {
            if (!mm.isSubtypeOf(node.type, et.source)) continue;
            std::size_t count = model.outEdges(id, etName).size();
            if (count < et.lower)
                add(report, id, "lower-bound",
                    "node " + std::to_string(id) + " has " + std::to_string(count) + " outgoing '" +
                        etName + "' edges, lower bound is " + std::to_string(et.lower));
            if (et.upper && count > *et.upper)
                add(report, id, "upper-bound",
                    "node " + std::to_string(id) + " has " + std::to_string(count) + " outgoing '" +
                        etName + "' edges, upper bound is " + std::to_string(*et.upper));
        }
    }

    // Containment forest: at most one container per node, no cycles.
    std::map<ElementId, ElementId> parent;
    for (const auto& [id, node] : model.nodes()) {
        std::size_t containers = 0;
        for (const auto& [etName, et] : mm.edgeTypes()) {
            if (!et.containment) continue;
            containers += model.inEdges(id, etName).size();
        }
        if (containers > 1)
            add(report, id, "multiple-containers",
                "node " + std::to_string(id) + " has " + std::to_string(containers) + " containers");
        ElementId up = model.containmentEdgeTo(id);
        if (up != 0) parent[id] = model.findEdge(up)->source;
    }
    std::map<ElementId, int> color; // 0 unseen, 1 on path, 2 done
    std::function<void(ElementId, std::vector<ElementId>&)> walk =
        [&](ElementId n, std::vector<ElementId>& path) {
            color[n] = 1;
            path.push_back(n);
            auto it = parent.find(n);
            if (it != parent.end()) {
                ElementId p = it->second;
                if (color[p] == 1) {
                    auto start = std::find(path.begin(), path.end(), p);
                    std::vector<ElementId> cycle(start, path.end());
                    std::sort(cycle.begin(), cycle.end());
                    add(report, cycle.front(), "containment-cycle",
                        "containment cycle of " + std::to_string(cycle.size()) + " nodes", cycle);
                } else if (color[p] == 0) {
                    walk(p, path);
                }
            }
            path.pop_back();
            color[n] = 2;
        };
    for (const auto& [id, node] : model.nodes()) {
        if (color[id] == 0) {
            std::vector<ElementId> path;
            walk(id, path);
        }
    }

    std::sort(report.findings.begin(), report.findings.end(),
              [](const ConformanceFinding& a, const ConformanceFinding& b) {
                  return std::tie(a.element, a.rule) < std::tie(b.element, b.rule);
              });
    return report;
}

} // namespace rtsync
