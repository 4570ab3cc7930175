#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "rtsync/sim/scenario.hpp"

namespace rtsync::sim {

struct BeanState {
    std::string id;
    std::string name;
    std::string kind;
    std::vector<std::string> provided;
    std::vector<std::string> required;
    std::map<std::string, std::string> wires; // required interface -> provider bean id
    std::int64_t callCount = 0;
    std::int64_t totalTimeMs = 0;
    std::vector<std::pair<std::string, std::int64_t>> exceptions; // typeName, atMs
};

struct ModuleState {
    std::string id;
    std::string name;
    std::vector<BeanState> beans;
};

struct ContainerState {
    std::string id;
    std::vector<ModuleState> modules;
};

struct RuntimeEvent {
    std::uint64_t seq = 0;
    std::int64_t atMs = 0;
    std::string op;
    std::string subject;
    std::string detail;
};

/// Deterministic simulated EJB-like container. Time is a logical clock
/// advanced only by scenario actions, so identical scripts replay to
/// identical states and event logs. One runtime executes one scenario;
/// the cursor into that script lives here (position()).
///
/// Beans and modules carry both an id (scenario-level handle) and a name
/// (what the source model shows). Deploy enforces global uniqueness of
/// both among live elements so the sensor pump can key its diff by name.
class Runtime {
public:
    explicit Runtime(std::uint64_t seed = 0);

    std::int64_t clock() const { return clock_; }
    std::uint64_t seed() const { return seed_; }
    std::size_t position() const { return pos_; }
    const std::vector<ContainerState>& containers() const { return containers_; }

    const BeanState* findBean(const std::string& id) const;
    const BeanState* findBeanByName(const std::string& name) const;
    const ModuleState* findModule(const std::string& id) const;
    const ModuleState* findModuleByName(const std::string& name) const;

    /// Executes the next k scenario actions and returns the events they
    /// appended. Throws ScenarioError naming the failing step when an
    /// action is invalid against the current state or the script runs out.
    std::vector<RuntimeEvent> step(const Scenario& scenario, std::size_t k);

    // effector surface: structural edits arriving from the source model,
    // keyed by the names the model carries
    void wireByName(const std::string& bean, const std::string& iface, const std::string& provider);
    void unwireByName(const std::string& bean, const std::string& iface);
    void removeBeanByName(const std::string& bean);
    void undeployByName(const std::string& module);

    const std::vector<RuntimeEvent>& eventLog() const { return events_; }
    /// One JSON object per line, keys in fixed (alphabetical) order.
    std::string eventLogJson() const;

private:
    BeanState* mutableBean(const std::string& id);
    void deploy(const ScenarioModuleSpec& spec);
    void undeploy(const std::string& moduleId);
    void doWire(const std::string& beanId, const std::string& iface, const std::string& providerId);
    void doUnwire(const std::string& beanId, const std::string& iface);
    void removeBean(const std::string& beanId);
    void dropWiresTo(const std::vector<std::string>& goneBeanIds);
    void logEvent(const std::string& op, const std::string& subject, const std::string& detail);

    std::uint64_t seed_ = 0;
    std::int64_t clock_ = 0;
    std::size_t pos_ = 0;
    std::uint64_t nextEventSeq_ = 1;
    std::vector<ContainerState> containers_;
    std::vector<RuntimeEvent> events_;
};

} // namespace rtsync::sim
