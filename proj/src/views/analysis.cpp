#include "rtsync/views/analysis.hpp"

#include <json.hpp>

#include <algorithm>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "rtsync/errors.hpp"

namespace rtsync::views {

namespace {

std::string attrString(const Node& n, const std::string& name) {
    return std::get<std::string>(n.attributes.at(name));
}

std::int64_t attrInt(const Node& n, const std::string& name) {
    return std::get<std::int64_t>(n.attributes.at(name));
}

double attrReal(const Node& n, const std::string& name) {
    return std::get<double>(n.attributes.at(name));
}

std::string num(double v) { return nlohmann::json(v).dump(); }

ElementId portOwner(const Model& view, ElementId port) {
    for (ElementId e : view.inEdges(port, "hasPort")) return view.findEdge(e)->source;
    return 0;
}

} // namespace

ManagerConfig loadManagerConfig(const std::string& jsonText) {
    nlohmann::json doc = nlohmann::json::parse(jsonText, nullptr, false);
    if (doc.is_discarded() || !doc.is_object())
        throw ParseError("manager config: not a JSON object");
    ManagerConfig cfg;
    for (const auto& [key, value] : doc.items()) {
        if (key == "perfThresholdMs") {
            if (!value.is_number()) throw ValidationError("manager config: perfThresholdMs must be a number");
            cfg.perfThresholdMs = value.get<double>();
        } else if (key == "failureWindowMs") {
            if (!value.is_number_integer()) throw ValidationError("manager config: failureWindowMs must be an integer");
            cfg.failureWindowMs = value.get<std::int64_t>();
        } else if (key == "failureCountThreshold") {
            if (!value.is_number_integer()) throw ValidationError("manager config: failureCountThreshold must be an integer");
            cfg.failureCountThreshold = value.get<std::int64_t>();
        } else if (key == "constraints") {
            if (!value.is_array()) throw ValidationError("manager config: constraints must be an array");
            cfg.constraints.clear();
            for (const auto& c : value) {
                std::string name = c.get<std::string>();
                if (name != "C1" && name != "C2")
                    throw ValidationError("manager config: unknown constraint '" + name + "'");
                cfg.constraints.insert(name);
            }
        } else {
            throw ValidationError("manager config: unknown key '" + key + "'");
        }
    }
    if (cfg.perfThresholdMs <= 0) throw ValidationError("manager config: perfThresholdMs must be positive");
    if (cfg.failureWindowMs <= 0) throw ValidationError("manager config: failureWindowMs must be positive");
    if (cfg.failureCountThreshold <= 0)
        throw ValidationError("manager config: failureCountThreshold must be positive");
    return cfg;
}

ManagerConfig loadManagerConfigFile(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open manager config: " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return loadManagerConfig(buf.str());
}

std::vector<Finding> checkArchConstraints(const Model& view, const ManagerConfig& cfg,
                                          std::uint64_t atSyncSeq) {
    std::vector<Finding> out;

    if (cfg.constraints.count("C1")) {
        for (ElementId port : view.nodesOfType("Port")) {
            const Node* n = view.findNode(port);
            if (attrString(*n, "direction") != "required") continue;
            if (!view.outEdges(port, "connector").empty()) continue;
            if (!view.inEdges(port, "connector").empty()) continue;
            ElementId comp = portOwner(view, port);
            std::string compName = comp ? attrString(*view.findNode(comp), "name") : "?";
            out.push_back({"architecture", "violation", {port},
                           "required port '" + attrString(*n, "interfaceName") + "' on component '" +
                               compName + "' has no connector",
                           atSyncSeq});
        }
    }

    if (cfg.constraints.count("C2")) {
        std::map<ElementId, std::set<ElementId>> adj;
        for (ElementId e : view.edgesOfType("connector")) {
            const Edge* ed = view.findEdge(e);
            ElementId from = portOwner(view, ed->source);
            ElementId to = portOwner(view, ed->target);
            if (from && to) adj[from].insert(to);
        }
        // each elementary cycle exactly once, rotated so its smallest
        // component id leads: DFS from s over nodes > s, closing back at s
        std::vector<std::vector<ElementId>> cycles;
        std::vector<ElementId> path;
        std::set<ElementId> onPath;
        std::function<void(ElementId, ElementId)> dfs = [&](ElementId s, ElementId u) {
            auto it = adj.find(u);
            if (it == adj.end()) return;
            for (ElementId v : it->second) {
                if (v == s) {
                    cycles.push_back(path);
                } else if (v > s && !onPath.count(v)) {
                    path.push_back(v);
                    onPath.insert(v);
                    dfs(s, v);
                    onPath.erase(v);
                    path.pop_back();
                }
            }
        };
        for (const auto& [s, ignored] : adj) {
            path = {s};
            onPath = {s};
            dfs(s, s);
        }
        std::sort(cycles.begin(), cycles.end());
        for (const auto& cycle : cycles) {
            std::string names;
            for (ElementId c : cycle) {
                if (!names.empty()) names += " -> ";
                names += attrString(*view.findNode(c), "name");
            }
            out.push_back({"architecture", "violation", cycle,
                           "connector cycle: " + names, atSyncSeq});
        }
    }

    std::sort(out.begin(), out.end(),
              [](const Finding& a, const Finding& b) { return a.subjects < b.subjects; });
    return out;
}

std::vector<Finding> analyzePerformance(const Model& view, const ManagerConfig& cfg,
                                        std::uint64_t atSyncSeq) {
    std::vector<Finding> out;
    for (ElementId id : view.nodesOfType("PerfComponent")) {
        const Node* n = view.findNode(id);
        if (attrInt(*n, "invocationCount") == 0) continue;
        double avg = attrReal(*n, "avgResponseTimeMs");
        if (avg > cfg.perfThresholdMs) {
            out.push_back({"performance", "warning", {id},
                           "component '" + attrString(*n, "name") + "': avgResponseTimeMs " +
                               num(avg) + " exceeds threshold " + num(cfg.perfThresholdMs),
                           atSyncSeq});
        }
    }
    return out;
}

std::vector<Finding> detectFailures(const Model& view, const ManagerConfig& cfg,
                                    std::int64_t nowMs, std::uint64_t atSyncSeq) {
    std::vector<Finding> out;
    for (ElementId id : view.nodesOfType("FaultyUnit")) {
        const Node* n = view.findNode(id);
        std::int64_t inWindow = 0;
        for (ElementId e : view.outEdges(id, "hasEvent")) {
            const Node* ev = view.findNode(view.findEdge(e)->target);
            std::int64_t at = attrInt(*ev, "atMs");
            if (at > nowMs - cfg.failureWindowMs && at <= nowMs) ++inWindow;
        }
        if (inWindow >= cfg.failureCountThreshold) {
            out.push_back({"failure", "violation", {id},
                           "unit '" + attrString(*n, "name") + "': " + std::to_string(inWindow) +
                               " failures in the last " + std::to_string(cfg.failureWindowMs) +
                               " ms",
                           atSyncSeq});
        }
    }
    return out;
}

ChangeBatch proposeAdaptation(const Finding& finding, Model& view) {
    // only C2 cycle findings are actionable; their subjects are components
    if (finding.manager != "architecture" || finding.subjects.empty())
        throw ValidationError("proposeAdaptation: unsupported finding kind");
    for (ElementId id : finding.subjects) {
        const Node* n = view.findNode(id);
        if (!n || n->type != "Component")
            throw ValidationError("proposeAdaptation: unsupported finding kind");
    }

    // collect the connectors realizing the cycle's arcs
    ElementId chosen = 0;
    std::pair<std::string, std::string> best;
    const auto& cycle = finding.subjects;
    for (std::size_t i = 0; i < cycle.size(); ++i) {
        ElementId from = cycle[i];
        ElementId to = cycle[(i + 1) % cycle.size()];
        for (ElementId e : view.edgesOfType("connector")) {
            const Edge* ed = view.findEdge(e);
            if (portOwner(view, ed->source) != from || portOwner(view, ed->target) != to)
                continue;
            std::pair<std::string, std::string> key{attrString(*view.findNode(from), "name"),
                                                    attrString(*view.findNode(to), "name")};
            if (!chosen || key < best) {
                chosen = e;
                best = key;
            }
        }
    }
    if (!chosen) throw ValidationError("proposeAdaptation: cycle has no connectors left");

    std::uint64_t mark = view.nextSeq() - 1;
    view.applyChange(DeleteEdge{chosen});
    return view.snapshotJournal(mark);
}

std::string findingsJson(const std::vector<Finding>& findings) {
    std::string out;
    for (const Finding& f : findings) {
        nlohmann::json j{{"manager", f.manager},
                         {"severity", f.severity},
                         {"subjects", f.subjects},
                         {"message", f.message},
                         {"atSyncSeq", f.atSyncSeq}};
        out += j.dump();
        out += '\n';
    }
    return out;
}

} // namespace rtsync::views
