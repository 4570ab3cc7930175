#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace rtsync::sim {

struct ScenarioBeanSpec {
    std::string id;
    std::string name;
    std::string kind; // stateless | stateful | message-driven
    std::vector<std::string> provided;
    std::vector<std::string> required;
};

struct ScenarioModuleSpec {
    std::string id;
    std::string name;
    std::vector<ScenarioBeanSpec> beans;
};

/// One scripted action. Which fields carry meaning depends on op; the
/// loader rejects steps whose parts are missing or malformed.
struct ScenarioStep {
    std::string op; // deploy|undeploy|wire|unwire|invoke|fail|advanceClock
    ScenarioModuleSpec module; // deploy
    std::string moduleId;      // undeploy
    std::string bean;          // wire|unwire|invoke|fail
    std::string iface;         // wire|unwire
    std::string provider;      // wire
    std::string exceptionType; // fail
    std::int64_t durationMs = 0; // invoke
    std::int64_t ms = 0;         // advanceClock
};

struct Scenario {
    std::uint64_t seed = 0;
    std::vector<ScenarioStep> steps;
};

/// Parses and statically checks a scenario document: every id a step
/// references must be live at that point of the script (deploy introduces
/// ids, undeploy retires them), names and ids must not collide among live
/// elements, and numeric arguments must be non-negative. Conditions that
/// depend on wiring state (unwire of an unwired interface and the like)
/// only surface at execution time as ScenarioError from Runtime::step.
Scenario loadScenario(const std::string& jsonText);
Scenario loadScenarioFile(const std::string& path);

} // namespace rtsync::sim
