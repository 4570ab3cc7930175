#include "rtsync/sim/scenario.hpp"

#include <json.hpp>

#include <algorithm>
#include <map>
#include <set>

#include "rtsync/errors.hpp"
#include "rtsync/model/io.hpp"

namespace rtsync::sim {

namespace {

using nlohmann::json;

[[noreturn]] void fail(std::size_t step, const std::string& msg) {
    throw ValidationError("scenario step " + std::to_string(step) + ": " + msg);
}

std::string requireString(const json& j, const char* key, std::size_t step) {
    if (!j.contains(key) || !j.at(key).is_string() || j.at(key).get<std::string>().empty())
        fail(step, std::string("missing or empty '") + key + "'");
    return j.at(key).get<std::string>();
}

std::int64_t requireCount(const json& j, const char* key, std::size_t step) {
    if (!j.contains(key) || !j.at(key).is_number_integer())
        fail(step, std::string("missing integer '") + key + "'");
    std::int64_t v = j.at(key).get<std::int64_t>();
    if (v < 0) fail(step, std::string("'") + key + "' must be non-negative");
    return v;
}

std::vector<std::string> stringList(const json& j, const char* key, std::size_t step) {
    std::vector<std::string> out;
    if (!j.contains(key)) return out;
    if (!j.at(key).is_array()) fail(step, std::string("'") + key + "' must be an array");
    std::set<std::string> seen;
    for (const auto& v : j.at(key)) {
        if (!v.is_string()) fail(step, std::string("'") + key + "' entries must be strings");
        std::string s = v.get<std::string>();
        if (!seen.insert(s).second) fail(step, "duplicate interface '" + s + "'");
        out.push_back(std::move(s));
    }
    return out;
}

ScenarioModuleSpec parseModuleSpec(const json& j, std::size_t step) {
    if (!j.is_object()) fail(step, "'module' must be an object");
    ScenarioModuleSpec spec;
    spec.id = requireString(j, "id", step);
    spec.name = requireString(j, "name", step);
    if (j.contains("beans")) {
        if (!j.at("beans").is_array()) fail(step, "'beans' must be an array");
        for (const auto& bj : j.at("beans")) {
            ScenarioBeanSpec b;
            b.id = requireString(bj, "id", step);
            b.name = requireString(bj, "name", step);
            b.kind = requireString(bj, "kind", step);
            if (b.kind != "stateless" && b.kind != "stateful" && b.kind != "message-driven")
                fail(step, "unknown bean kind '" + b.kind + "'");
            b.provided = stringList(bj, "provides", step);
            b.required = stringList(bj, "requires", step);
            spec.beans.push_back(std::move(b));
        }
    }
    return spec;
}

/// Static world the script builds up: which ids are live at each point.
struct ScriptState {
    std::set<std::string> moduleIds, moduleNames, beanIds, beanNames;
    std::map<std::string, const ScenarioBeanSpec*> beans; // by id
    std::map<std::string, std::vector<std::string>> moduleBeans;
};

void checkDeploy(ScriptState& st, const ScenarioModuleSpec& spec, std::size_t step) {
    if (st.moduleIds.count(spec.id)) fail(step, "module id '" + spec.id + "' already deployed");
    if (st.moduleNames.count(spec.name))
        fail(step, "module name '" + spec.name + "' already in use");
    std::set<std::string> localIds, localNames;
    for (const auto& b : spec.beans) {
        if (st.beanIds.count(b.id) || !localIds.insert(b.id).second)
            fail(step, "bean id '" + b.id + "' already deployed");
        if (st.beanNames.count(b.name) || !localNames.insert(b.name).second)
            fail(step, "bean name '" + b.name + "' already in use");
    }
    st.moduleIds.insert(spec.id);
    st.moduleNames.insert(spec.name);
    for (const auto& b : spec.beans) {
        st.beanIds.insert(b.id);
        st.beanNames.insert(b.name);
        st.beans[b.id] = &b;
        st.moduleBeans[spec.id].push_back(b.id);
    }
}

void checkUndeploy(ScriptState& st, const Scenario& sc, const std::string& moduleId,
                   std::size_t step) {
    if (!st.moduleIds.count(moduleId)) fail(step, "unknown module '" + moduleId + "'");
    st.moduleIds.erase(moduleId);
    for (const auto& bid : st.moduleBeans[moduleId]) {
        st.beanIds.erase(bid);
        st.beanNames.erase(st.beans[bid]->name);
        st.beans.erase(bid);
    }
    st.moduleBeans.erase(moduleId);
    // the retired module name may be reused by a later deploy
    for (std::size_t i = step; i-- > 0;) {
        const ScenarioStep& s = sc.steps[i];
        if (s.op == "deploy" && s.module.id == moduleId) {
            st.moduleNames.erase(s.module.name);
            break;
        }
    }
}

const ScenarioBeanSpec* liveBean(const ScriptState& st, const std::string& id, std::size_t step) {
    auto it = st.beans.find(id);
    if (it == st.beans.end()) fail(step, "unknown bean '" + id + "'");
    return it->second;
}

} // namespace

Scenario loadScenario(const std::string& jsonText) {
    json doc;
    try {
        doc = json::parse(jsonText);
    } catch (const json::exception& e) {
        throw ParseError(std::string("scenario: ") + e.what());
    }
    if (!doc.is_object() || !doc.contains("steps") || !doc.at("steps").is_array())
        throw ParseError("scenario: document must carry a 'steps' array");

    Scenario sc;
    sc.seed = doc.value("seed", std::uint64_t(0));
    std::size_t idx = 0;
    for (const auto& sj : doc.at("steps")) {
        if (!sj.is_object() || !sj.contains("op") || !sj.at("op").is_string())
            fail(idx, "missing 'op'");
        ScenarioStep s;
        s.op = sj.at("op").get<std::string>();
        if (s.op == "deploy") {
            if (!sj.contains("module")) fail(idx, "deploy needs 'module'");
            s.module = parseModuleSpec(sj.at("module"), idx);
        } else if (s.op == "undeploy") {
            s.moduleId = requireString(sj, "module", idx);
        } else if (s.op == "wire") {
            s.bean = requireString(sj, "bean", idx);
            s.iface = requireString(sj, "iface", idx);
            s.provider = requireString(sj, "provider", idx);
        } else if (s.op == "unwire") {
            s.bean = requireString(sj, "bean", idx);
            s.iface = requireString(sj, "iface", idx);
        } else if (s.op == "invoke") {
            s.bean = requireString(sj, "bean", idx);
            s.durationMs = requireCount(sj, "durationMs", idx);
        } else if (s.op == "fail") {
            s.bean = requireString(sj, "bean", idx);
            s.exceptionType = requireString(sj, "type", idx);
        } else if (s.op == "advanceClock") {
            s.ms = requireCount(sj, "ms", idx);
        } else {
            fail(idx, "unknown op '" + s.op + "'");
        }
        sc.steps.push_back(std::move(s));
        ++idx;
    }

    // id liveness walk over the finished script
    ScriptState st;
    for (std::size_t i = 0; i < sc.steps.size(); ++i) {
        const ScenarioStep& s = sc.steps[i];
        if (s.op == "deploy") {
            checkDeploy(st, sc.steps[i].module, i);
        } else if (s.op == "undeploy") {
            checkUndeploy(st, sc, s.moduleId, i);
        } else if (s.op == "wire") {
            const ScenarioBeanSpec* b = liveBean(st, s.bean, i);
            const ScenarioBeanSpec* p = liveBean(st, s.provider, i);
            if (std::find(b->required.begin(), b->required.end(), s.iface) == b->required.end())
                fail(i, "bean '" + s.bean + "' does not require '" + s.iface + "'");
            if (std::find(p->provided.begin(), p->provided.end(), s.iface) == p->provided.end())
                fail(i, "bean '" + s.provider + "' does not provide '" + s.iface + "'");
        } else if (s.op == "unwire") {
            const ScenarioBeanSpec* b = liveBean(st, s.bean, i);
            if (std::find(b->required.begin(), b->required.end(), s.iface) == b->required.end())
                fail(i, "bean '" + s.bean + "' does not require '" + s.iface + "'");
        } else if (s.op == "invoke" || s.op == "fail") {
            liveBean(st, s.bean, i);
        }
    }
    return sc;
}

Scenario loadScenarioFile(const std::string& path) {
    return loadScenario(io::readFile(path));
}

} // namespace rtsync::sim
