#include "rtsync/model/isomorphism.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <tuple>
#include <unordered_map>
#include <vector>

#include "rtsync/errors.hpp"

namespace rtsync {

namespace {

struct Adjacency {
    // (direction '<'/'>', edge type, neighbor node) per incident edge
    std::vector<std::tuple<char, std::string, ElementId>> arcs;
};

std::map<ElementId, Adjacency> buildAdjacency(const Model& m) {
    std::map<ElementId, Adjacency> adj;
    for (const auto& [id, node] : m.nodes()) adj[id]; // ensure entry
    for (const auto& [eid, e] : m.edges()) {
        adj[e.source].arcs.emplace_back('>', e.type, e.target);
        adj[e.target].arcs.emplace_back('<', e.type, e.source);
    }
    return adj;
}

// Joint label refinement over both models: start from (type, attributes),
// fold in the multiset of (direction, edge type, neighbor label) per round.
// Labels are interned in one shared table so classes are comparable across
// the two models. Stops when the number of classes stabilizes.
void refineLabels(const Model& a, const Model& b, std::map<ElementId, int>& labelA,
                  std::map<ElementId, int>& labelB) {
    auto adjA = buildAdjacency(a);
    auto adjB = buildAdjacency(b);

    std::unordered_map<std::string, int> intern;
    auto internOf = [&](const std::string& s) {
        auto [it, inserted] = intern.emplace(s, static_cast<int>(intern.size()));
        return it->second;
    };
    auto initial = [&](const Model& m, std::map<ElementId, int>& label) {
        for (const auto& [id, node] : m.nodes()) {
            std::ostringstream os;
            os << node.type;
            for (const auto& [name, value] : node.attributes)
                os << '|' << name << '=' << toString(value);
            label[id] = internOf(os.str());
        }
    };
    initial(a, labelA);
    initial(b, labelB);

    std::size_t classCount = intern.size();
    std::size_t maxRounds = a.nodes().size() + 1;
    for (std::size_t round = 0; round < maxRounds; ++round) {
        intern.clear();
        auto step = [&](const Model& m, const std::map<ElementId, Adjacency>& adj,
                        const std::map<ElementId, int>& label) {
            std::map<ElementId, int> next;
            for (const auto& [id, node] : m.nodes()) {
                std::vector<std::string> env;
                for (const auto& [dir, type, nb] : adj.at(id).arcs) {
                    env.push_back(dir + type + ':' + std::to_string(label.at(nb)));
                }
                std::sort(env.begin(), env.end());
                std::ostringstream os;
                os << label.at(id) << '#';
                for (const auto& e : env) os << e << ';';
                next[id] = internOf(os.str());
            }
            return next;
        };
        auto nextA = step(a, adjA, labelA);
        auto nextB = step(b, adjB, labelB);
        std::size_t nextCount = intern.size();
        labelA = std::move(nextA);
        labelB = std::move(nextB);
        if (nextCount == classCount) break;
        classCount = nextCount;
    }
}

} // namespace

IsomorphismResult isomorphic(const Model& a, const Model& b) {
    if (a.metaModel().name() != b.metaModel().name())
        throw ValidationError("isomorphism check across different metamodels ('" +
                              a.metaModel().name() + "' vs '" + b.metaModel().name() + "')");

    IsomorphismResult result;
    if (a.nodes().size() != b.nodes().size() || a.edges().size() != b.edges().size())
        return result;
    if (a.nodes().empty() && a.edges().empty()) {
        result.isomorphic = true;
        result.witness = IsomorphismWitness{};
        return result;
    }

    std::map<ElementId, int> labelA, labelB;
    refineLabels(a, b, labelA, labelB);

    std::map<int, std::vector<ElementId>> classesB;
    for (const auto& [id, l] : labelB) classesB[l].push_back(id);
    {
        std::map<int, std::size_t> countA;
        for (const auto& [id, l] : labelA) ++countA[l];
        if (countA.size() != classesB.size()) return result;
        for (const auto& [l, n] : countA) {
            auto it = classesB.find(l);
            if (it == classesB.end() || it->second.size() != n) return result;
        }
    }

    auto adjA = buildAdjacency(a);
    auto adjB = buildAdjacency(b);

    // Small candidate classes first, ascending id within a class.
    std::vector<ElementId> order;
    for (const auto& [id, l] : labelA) order.push_back(id);
    std::sort(order.begin(), order.end(), [&](ElementId x, ElementId y) {
        std::size_t cx = classesB.at(labelA.at(x)).size();
        std::size_t cy = classesB.at(labelA.at(y)).size();
        return std::tie(cx, x) < std::tie(cy, y);
    });

    std::map<ElementId, ElementId> nodeMap;
    std::set<ElementId> used;

    // Local consistency: edges between the candidate pair and already
    // mapped nodes must agree as multisets of (direction, type, image).
    auto mappedArcs = [](const Adjacency& adj, const std::set<ElementId>& domain,
                         const std::function<ElementId(ElementId)>& image) {
        std::map<std::tuple<char, std::string, ElementId>, std::size_t> counts;
        for (const auto& [dir, type, nb] : adj.arcs) {
            if (domain.count(nb)) ++counts[{dir, type, image(nb)}];
        }
        return counts;
    };

    std::set<ElementId> mappedA;
    std::function<bool(std::size_t)> assign = [&](std::size_t idx) -> bool {
        if (idx == order.size()) return true;
        ElementId na = order[idx];
        auto wantedArcs = mappedArcs(adjA.at(na), mappedA,
                                     [&](ElementId x) { return nodeMap.at(x); });
        for (ElementId nb : classesB.at(labelA.at(na))) {
            if (used.count(nb)) continue;
            auto actualArcs = mappedArcs(adjB.at(nb), used, [](ElementId x) { return x; });
            if (actualArcs != wantedArcs) continue;
            nodeMap[na] = nb;
            mappedA.insert(na);
            used.insert(nb);
            if (assign(idx + 1)) return true;
            nodeMap.erase(na);
            mappedA.erase(na);
            used.erase(nb);
        }
        return false;
    };
    if (!assign(0)) return result;

    // Edge bijection: group by (type, mapped endpoints); group sizes must
    // agree, ascending ids are paired for the witness.
    std::map<std::tuple<std::string, ElementId, ElementId>, std::vector<ElementId>> edgesA, edgesB;
    for (const auto& [id, e] : a.edges())
        edgesA[{e.type, nodeMap.at(e.source), nodeMap.at(e.target)}].push_back(id);
    for (const auto& [id, e] : b.edges()) edgesB[{e.type, e.source, e.target}].push_back(id);
    if (edgesA.size() != edgesB.size()) return result;
    IsomorphismWitness witness;
    witness.nodeMap = nodeMap;
    for (auto& [key, idsA] : edgesA) {
        auto it = edgesB.find(key);
        if (it == edgesB.end() || it->second.size() != idsA.size()) return result;
        for (std::size_t i = 0; i < idsA.size(); ++i) witness.edgeMap[idsA[i]] = it->second[i];
    }

    result.isomorphic = true;
    result.witness = std::move(witness);
    return result;
}

bool verifyWitness(const Model& a, const Model& b, const IsomorphismWitness& w) {
    if (w.nodeMap.size() != a.nodes().size() || w.nodeMap.size() != b.nodes().size()) return false;
    if (w.edgeMap.size() != a.edges().size() || w.edgeMap.size() != b.edges().size()) return false;
    std::set<ElementId> imageN, imageE;
    for (const auto& [na, nb] : w.nodeMap) {
        const Node* x = a.findNode(na);
        const Node* y = b.findNode(nb);
        if (!x || !y || !imageN.insert(nb).second) return false;
        if (x->type != y->type || x->attributes != y->attributes) return false;
    }
    for (const auto& [ea, eb] : w.edgeMap) {
        const Edge* x = a.findEdge(ea);
        const Edge* y = b.findEdge(eb);
        if (!x || !y || !imageE.insert(eb).second) return false;
        if (x->type != y->type) return false;
        if (w.nodeMap.at(x->source) != y->source || w.nodeMap.at(x->target) != y->target)
            return false;
    }
    return true;
}

} // namespace rtsync
