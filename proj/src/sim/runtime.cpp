#include "rtsync/sim/runtime.hpp"

#include <json.hpp>

#include <algorithm>

#include "rtsync/errors.hpp"

namespace rtsync::sim {

namespace {

[[noreturn]] void fault(std::size_t step, const std::string& msg) {
    throw ScenarioError("step " + std::to_string(step) + ": " + msg);
}

bool contains(const std::vector<std::string>& v, const std::string& s) {
    return std::find(v.begin(), v.end(), s) != v.end();
}

} // namespace

Runtime::Runtime(std::uint64_t seed) : seed_(seed) {
    containers_.push_back(ContainerState{"main", {}});
}

const BeanState* Runtime::findBean(const std::string& id) const {
    for (const auto& c : containers_)
        for (const auto& m : c.modules)
            for (const auto& b : m.beans)
                if (b.id == id) return &b;
    return nullptr;
}

const BeanState* Runtime::findBeanByName(const std::string& name) const {
    for (const auto& c : containers_)
        for (const auto& m : c.modules)
            for (const auto& b : m.beans)
                if (b.name == name) return &b;
    return nullptr;
}

const ModuleState* Runtime::findModule(const std::string& id) const {
    for (const auto& c : containers_)
        for (const auto& m : c.modules)
            if (m.id == id) return &m;
    return nullptr;
}

const ModuleState* Runtime::findModuleByName(const std::string& name) const {
    for (const auto& c : containers_)
        for (const auto& m : c.modules)
            if (m.name == name) return &m;
    return nullptr;
}

BeanState* Runtime::mutableBean(const std::string& id) {
    for (auto& c : containers_)
        for (auto& m : c.modules)
            for (auto& b : m.beans)
                if (b.id == id) return &b;
    return nullptr;
}

void Runtime::logEvent(const std::string& op, const std::string& subject,
                       const std::string& detail) {
    events_.push_back(RuntimeEvent{nextEventSeq_++, clock_, op, subject, detail});
}

void Runtime::deploy(const ScenarioModuleSpec& spec) {
    if (findModule(spec.id)) throw ScenarioError("module '" + spec.id + "' already deployed");
    if (findModuleByName(spec.name))
        throw ScenarioError("module name '" + spec.name + "' already in use");
    for (const auto& b : spec.beans) {
        if (findBean(b.id)) throw ScenarioError("bean '" + b.id + "' already deployed");
        if (findBeanByName(b.name))
            throw ScenarioError("bean name '" + b.name + "' already in use");
    }
    ModuleState mod{spec.id, spec.name, {}};
    for (const auto& b : spec.beans) {
        BeanState bs;
        bs.id = b.id;
        bs.name = b.name;
        bs.kind = b.kind;
        bs.provided = b.provided;
        bs.required = b.required;
        mod.beans.push_back(std::move(bs));
    }
    containers_.front().modules.push_back(std::move(mod));
}

void Runtime::dropWiresTo(const std::vector<std::string>& goneBeanIds) {
    for (auto& c : containers_)
        for (auto& m : c.modules)
            for (auto& b : m.beans)
                for (auto it = b.wires.begin(); it != b.wires.end();)
                    it = contains(goneBeanIds, it->second) ? b.wires.erase(it) : std::next(it);
}

void Runtime::undeploy(const std::string& moduleId) {
    for (auto& c : containers_) {
        for (auto it = c.modules.begin(); it != c.modules.end(); ++it) {
            if (it->id != moduleId) continue;
            std::vector<std::string> gone;
            for (const auto& b : it->beans) gone.push_back(b.id);
            c.modules.erase(it);
            dropWiresTo(gone);
            return;
        }
    }
    throw ScenarioError("unknown module '" + moduleId + "'");
}

void Runtime::doWire(const std::string& beanId, const std::string& iface,
                     const std::string& providerId) {
    BeanState* b = mutableBean(beanId);
    if (!b) throw ScenarioError("unknown bean '" + beanId + "'");
    const BeanState* p = findBean(providerId);
    if (!p) throw ScenarioError("unknown bean '" + providerId + "'");
    if (!contains(b->required, iface))
        throw ScenarioError("bean '" + beanId + "' does not require '" + iface + "'");
    if (!contains(p->provided, iface))
        throw ScenarioError("bean '" + providerId + "' does not provide '" + iface + "'");
    if (b->wires.count(iface))
        throw ScenarioError("bean '" + beanId + "' already wired for '" + iface + "'");
    b->wires[iface] = providerId;
}

void Runtime::doUnwire(const std::string& beanId, const std::string& iface) {
    BeanState* b = mutableBean(beanId);
    if (!b) throw ScenarioError("unknown bean '" + beanId + "'");
    if (!b->wires.erase(iface))
        throw ScenarioError("bean '" + beanId + "' is not wired for '" + iface + "'");
}

void Runtime::removeBean(const std::string& beanId) {
    for (auto& c : containers_) {
        for (auto& m : c.modules) {
            for (auto it = m.beans.begin(); it != m.beans.end(); ++it) {
                if (it->id != beanId) continue;
                m.beans.erase(it);
                dropWiresTo({beanId});
                return;
            }
        }
    }
    throw ScenarioError("unknown bean '" + beanId + "'");
}

std::vector<RuntimeEvent> Runtime::step(const Scenario& scenario, std::size_t k) {
    if (k < 1) throw ScenarioError("step count must be at least 1");
    if (pos_ + k > scenario.steps.size())
        fault(pos_, "script exhausted (" + std::to_string(scenario.steps.size()) + " steps)");
    std::size_t firstEvent = events_.size();
    for (std::size_t n = 0; n < k; ++n) {
        const ScenarioStep& s = scenario.steps[pos_];
        try {
            if (s.op == "deploy") {
                deploy(s.module);
                logEvent("deploy", s.module.id,
                         std::to_string(s.module.beans.size()) + " beans");
            } else if (s.op == "undeploy") {
                undeploy(s.moduleId);
                logEvent("undeploy", s.moduleId, "");
            } else if (s.op == "wire") {
                doWire(s.bean, s.iface, s.provider);
                logEvent("wire", s.bean, s.iface + " -> " + s.provider);
            } else if (s.op == "unwire") {
                doUnwire(s.bean, s.iface);
                logEvent("unwire", s.bean, s.iface);
            } else if (s.op == "invoke") {
                BeanState* b = mutableBean(s.bean);
                if (!b) throw ScenarioError("unknown bean '" + s.bean + "'");
                b->callCount += 1;
                b->totalTimeMs += s.durationMs;
                logEvent("invoke", s.bean, std::to_string(s.durationMs) + " ms");
            } else if (s.op == "fail") {
                BeanState* b = mutableBean(s.bean);
                if (!b) throw ScenarioError("unknown bean '" + s.bean + "'");
                b->exceptions.emplace_back(s.exceptionType, clock_);
                logEvent("fail", s.bean, s.exceptionType);
            } else if (s.op == "advanceClock") {
                clock_ += s.ms;
                logEvent("advanceClock", "", std::to_string(s.ms) + " ms");
            } else {
                throw ScenarioError("unknown op '" + s.op + "'");
            }
        } catch (const ScenarioError& e) {
            fault(pos_, e.what());
        }
        ++pos_;
    }
    return std::vector<RuntimeEvent>(events_.begin() + firstEvent, events_.end());
}

void Runtime::wireByName(const std::string& bean, const std::string& iface,
                         const std::string& provider) {
    const BeanState* b = findBeanByName(bean);
    const BeanState* p = findBeanByName(provider);
    if (!b) throw ScenarioError("unknown bean '" + bean + "'");
    if (!p) throw ScenarioError("unknown bean '" + provider + "'");
    doWire(b->id, iface, p->id);
    logEvent("wire", b->id, iface + " -> " + p->id);
}

void Runtime::unwireByName(const std::string& bean, const std::string& iface) {
    const BeanState* b = findBeanByName(bean);
    if (!b) throw ScenarioError("unknown bean '" + bean + "'");
    doUnwire(b->id, iface);
    logEvent("unwire", b->id, iface);
}

void Runtime::removeBeanByName(const std::string& bean) {
    const BeanState* b = findBeanByName(bean);
    if (!b) throw ScenarioError("unknown bean '" + bean + "'");
    std::string id = b->id;
    removeBean(id);
    logEvent("remove-bean", id, "");
}

void Runtime::undeployByName(const std::string& module) {
    const ModuleState* m = findModuleByName(module);
    if (!m) throw ScenarioError("unknown module '" + module + "'");
    std::string id = m->id;
    undeploy(id);
    logEvent("undeploy", id, "");
}

std::string Runtime::eventLogJson() const {
    std::string out;
    for (const auto& e : events_) {
        nlohmann::json j{{"atMs", e.atMs},
                         {"detail", e.detail},
                         {"op", e.op},
                         {"seq", e.seq},
                         {"subject", e.subject}};
        out += j.dump();
        out += '\n';
    }
    return out;
}

} // namespace rtsync::sim
