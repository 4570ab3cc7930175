#pragma once

#include <cstdint>
#include <filesystem>
#include <set>
#include <string>
#include <vector>

#include "rtsync/model/change.hpp"
#include "rtsync/model/model.hpp"

namespace rtsync::views {

struct ManagerConfig {
    double perfThresholdMs = 100.0;
    std::int64_t failureWindowMs = 1000;
    std::int64_t failureCountThreshold = 3;
    std::set<std::string> constraints{"C1", "C2"};
};

ManagerConfig loadManagerConfig(const std::string& jsonText);
ManagerConfig loadManagerConfigFile(const std::filesystem::path& path);

struct Finding {
    std::string manager;
    std::string severity; // info | warning | violation
    std::vector<ElementId> subjects;
    std::string message;
    std::uint64_t atSyncSeq = 0;
};

/// C1: every required Port must have an incident connector. C2: the
/// connector graph over components must be acyclic; one finding per
/// elementary directed cycle, rotated to start at its smallest component
/// id. Findings are ordered by their subject ids.
std::vector<Finding> checkArchConstraints(const Model& view, const ManagerConfig& cfg,
                                          std::uint64_t atSyncSeq = 0);

/// One warning per PerfComponent whose avgResponseTimeMs strictly exceeds
/// the threshold. Components that were never invoked are exempt.
std::vector<Finding> analyzePerformance(const Model& view, const ManagerConfig& cfg,
                                        std::uint64_t atSyncSeq = 0);

/// One violation per FaultyUnit with at least failureCountThreshold events
/// inside the half-open window (nowMs - failureWindowMs, nowMs].
std::vector<Finding> detectFailures(const Model& view, const ManagerConfig& cfg,
                                    std::int64_t nowMs, std::uint64_t atSyncSeq = 0);

/// Resolves a C2 cycle finding by deleting the cycle's connector with the
/// lexicographically smallest (from-component, to-component) name pair.
/// Mutates the view and returns the resulting journal segment, ready to be
/// handed to syncBackward. Any other finding kind is an error.
ChangeBatch proposeAdaptation(const Finding& finding, Model& view);

/// One JSON object per line, keys sorted, trailing newline.
std::string findingsJson(const std::vector<Finding>& findings);

} // namespace rtsync::views
