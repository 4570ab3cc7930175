#include "rtsync/model/io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "rtsync/errors.hpp"

using nlohmann::json;

namespace rtsync::io {

namespace {

json parseJson(const std::string& text, const char* what) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string(what) + ": " + e.what());
    }
}

const json& field(const json& j, const char* name, const char* context) {
    auto it = j.find(name);
    if (it == j.end())
        throw ValidationError(std::string(context) + ": missing field '" + name + "'");
    return *it;
}

std::string stringField(const json& j, const char* name, const char* context) {
    const json& v = field(j, name, context);
    if (!v.is_string())
        throw ValidationError(std::string(context) + ": field '" + name + "' must be a string");
    return v.get<std::string>();
}

AttrValue valueFromJson(const json& v, const char* context) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_boolean()) return v.get<bool>();
    if (v.is_number_integer()) return v.get<std::int64_t>();
    if (v.is_number_float()) return v.get<double>();
    throw ValidationError(std::string(context) + ": unsupported attribute value type");
}

json valueToJson(const AttrValue& v) {
    switch (kindOf(v)) {
    case ValueKind::String: return std::get<std::string>(v);
    case ValueKind::Integer: return std::get<std::int64_t>(v);
    case ValueKind::Real: return std::get<double>(v);
    case ValueKind::Boolean: return std::get<bool>(v);
    }
    return nullptr;
}

} // namespace

MetaModel loadMetaModel(const std::string& jsonText) {
    json j = parseJson(jsonText, "metamodel");
    if (!j.is_object()) throw ValidationError("metamodel: document must be an object");

    std::string name = stringField(j, "name", "metamodel");

    std::vector<NodeType> nodeTypes;
    const json& nts = field(j, "nodeTypes", "metamodel");
    if (!nts.is_array()) throw ValidationError("metamodel: 'nodeTypes' must be an array");
    for (const json& nt : nts) {
        NodeType t;
        t.name = stringField(nt, "name", "metamodel node type");
        std::string ctx = "metamodel node type '" + t.name + "'";
        if (nt.contains("supertype") && !nt["supertype"].is_null()) {
            if (!nt["supertype"].is_string())
                throw ValidationError(ctx + ": 'supertype' must be a string");
            t.supertype = nt["supertype"].get<std::string>();
        }
        if (nt.contains("abstract")) {
            if (!nt["abstract"].is_boolean())
                throw ValidationError(ctx + ": 'abstract' must be a boolean");
            t.abstractFlag = nt["abstract"].get<bool>();
        }
        if (nt.contains("attributes")) {
            if (!nt["attributes"].is_array())
                throw ValidationError(ctx + ": 'attributes' must be an array");
            for (const json& at : nt["attributes"]) {
                AttributeDef def;
                def.name = stringField(at, "name", ctx.c_str());
                std::string kind = stringField(at, "kind", ctx.c_str());
                try {
                    def.kind = kindFromName(kind);
                } catch (const Error&) {
                    throw ValidationError(ctx + ": unknown attribute kind '" + kind + "'");
                }
                t.attributes.push_back(std::move(def));
            }
        }
        nodeTypes.push_back(std::move(t));
    }

    std::vector<EdgeType> edgeTypes;
    const json& ets = field(j, "edgeTypes", "metamodel");
    if (!ets.is_array()) throw ValidationError("metamodel: 'edgeTypes' must be an array");
    for (const json& et : ets) {
        EdgeType t;
        t.name = stringField(et, "name", "metamodel edge type");
        std::string ctx = "metamodel edge type '" + t.name + "'";
        t.source = stringField(et, "source", ctx.c_str());
        t.target = stringField(et, "target", ctx.c_str());
        if (et.contains("containment")) {
            if (!et["containment"].is_boolean())
                throw ValidationError(ctx + ": 'containment' must be a boolean");
            t.containment = et["containment"].get<bool>();
        }
        if (et.contains("lower")) {
            if (!et["lower"].is_number_unsigned())
                throw ValidationError(ctx + ": 'lower' must be a non-negative integer");
            t.lower = et["lower"].get<std::uint32_t>();
        }
        if (et.contains("upper") && !et["upper"].is_null()) {
            const json& up = et["upper"];
            if (up.is_string()) {
                if (up.get<std::string>() != "*")
                    throw ValidationError(ctx + ": 'upper' must be an integer or \"*\"");
            } else if (up.is_number_unsigned()) {
                t.upper = up.get<std::uint32_t>();
            } else {
                throw ValidationError(ctx + ": 'upper' must be an integer or \"*\"");
            }
        }
        edgeTypes.push_back(std::move(t));
    }

    return MetaModel(std::move(name), std::move(nodeTypes), std::move(edgeTypes));
}

MetaModel loadMetaModelFile(const std::filesystem::path& path) {
    return loadMetaModel(readFile(path));
}

std::string saveMetaModel(const MetaModel& mm) {
    json j;
    j["name"] = mm.name();
    j["nodeTypes"] = json::array();
    for (const auto& [name, t] : mm.nodeTypes()) {
        json nt;
        nt["name"] = t.name;
        if (t.supertype) nt["supertype"] = *t.supertype;
        if (t.abstractFlag) nt["abstract"] = true;
        json attrs = json::array();
        for (const auto& a : t.attributes) attrs.push_back({{"name", a.name}, {"kind", kindName(a.kind)}});
        nt["attributes"] = std::move(attrs);
        j["nodeTypes"].push_back(std::move(nt));
    }
    j["edgeTypes"] = json::array();
    for (const auto& [name, t] : mm.edgeTypes()) {
        json et;
        et["name"] = t.name;
        et["source"] = t.source;
        et["target"] = t.target;
        et["containment"] = t.containment;
        et["lower"] = t.lower;
        if (t.upper) et["upper"] = *t.upper;
        else et["upper"] = "*";
        j["edgeTypes"].push_back(std::move(et));
    }
    return j.dump(2) + "\n";
}

Model loadModel(const std::string& jsonText, std::shared_ptr<const MetaModel> mm) {
    json j = parseJson(jsonText, "model");
    if (!j.is_object()) throw ValidationError("model: document must be an object");
    std::string metaName = stringField(j, "metaModel", "model");
    if (mm == nullptr) throw ValidationError("model: metamodel must be provided");
    if (metaName != mm->name())
        throw ValidationError("model: document references metamodel '" + metaName +
                              "' but '" + mm->name() + "' was provided");

    std::string modelId = j.contains("id") && j["id"].is_string() ? j["id"].get<std::string>()
                                                                  : std::string("model");
    Model model(modelId, std::move(mm));

    const json& nodes = field(j, "nodes", "model");
    if (!nodes.is_array()) throw ValidationError("model: 'nodes' must be an array");
    for (const json& n : nodes) {
        Node node;
        const json& idv = field(n, "id", "model node");
        if (!idv.is_number_unsigned() || idv.get<std::uint64_t>() == 0)
            throw ValidationError("model node: 'id' must be a positive integer");
        node.id = idv.get<ElementId>();
        node.type = stringField(n, "type", "model node");
        std::string ctx = "model node " + std::to_string(node.id);
        if (n.contains("attrs")) {
            if (!n["attrs"].is_object())
                throw ValidationError(ctx + ": 'attrs' must be an object");
            const auto* nt = model.metaModel().findNodeType(node.type);
            const std::map<std::string, AttributeDef>* defs =
                nt ? &model.metaModel().flatAttributes(node.type) : nullptr;
            for (const auto& [key, value] : n["attrs"].items()) {
                AttrValue v = valueFromJson(value, ctx.c_str());
                // integer literals fill real-kinded slots
                if (defs) {
                    auto it = defs->find(key);
                    if (it != defs->end() && it->second.kind == ValueKind::Real &&
                        kindOf(v) == ValueKind::Integer)
                        v = static_cast<double>(std::get<std::int64_t>(v));
                }
                node.attributes.emplace(key, std::move(v));
            }
        }
        if (model.findNode(node.id) || model.findEdge(node.id))
            throw ValidationError(ctx + ": duplicate element id");
        model.insertNodeRaw(std::move(node));
    }

    const json& edges = field(j, "edges", "model");
    if (!edges.is_array()) throw ValidationError("model: 'edges' must be an array");
    for (const json& e : edges) {
        Edge edge;
        const json& idv = field(e, "id", "model edge");
        if (!idv.is_number_unsigned() || idv.get<std::uint64_t>() == 0)
            throw ValidationError("model edge: 'id' must be a positive integer");
        edge.id = idv.get<ElementId>();
        edge.type = stringField(e, "type", "model edge");
        std::string ctx = "model edge " + std::to_string(edge.id);
        const json& src = field(e, "src", ctx.c_str());
        const json& dst = field(e, "dst", ctx.c_str());
        if (!src.is_number_unsigned() || !dst.is_number_unsigned())
            throw ValidationError(ctx + ": 'src' and 'dst' must be element ids");
        edge.source = src.get<ElementId>();
        edge.target = dst.get<ElementId>();
        if (model.findNode(edge.id) || model.findEdge(edge.id))
            throw ValidationError(ctx + ": duplicate element id");
        model.insertEdgeRaw(std::move(edge));
    }

    return model;
}

Model loadModelFile(const std::filesystem::path& path, std::shared_ptr<const MetaModel> mm) {
    return loadModel(readFile(path), std::move(mm));
}

std::string saveModel(const Model& model) {
    json j;
    j["id"] = model.id();
    j["metaModel"] = model.metaModel().name();
    j["nodes"] = json::array();
    for (const auto& [id, node] : model.nodes()) {
        json n;
        n["id"] = node.id;
        n["type"] = node.type;
        json attrs = json::object();
        for (const auto& [key, value] : node.attributes) attrs[key] = valueToJson(value);
        n["attrs"] = std::move(attrs);
        j["nodes"].push_back(std::move(n));
    }
    j["edges"] = json::array();
    for (const auto& [id, edge] : model.edges()) {
        json e;
        e["id"] = edge.id;
        e["type"] = edge.type;
        e["src"] = edge.source;
        e["dst"] = edge.target;
        j["edges"].push_back(std::move(e));
    }
    return j.dump(2) + "\n";
}

void writeFile(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot open file for writing: " + path.string());
    out << content;
    if (!out) throw Error("write failed: " + path.string());
}

std::string readFile(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot read file: " + path.string());
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

} // namespace rtsync::io
