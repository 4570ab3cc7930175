#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rtsync/model/model.hpp"
#include "rtsync/tgg/rule.hpp"
#include "rtsync/tgg/sync.hpp"
#include "rtsync/views/analysis.hpp"

namespace rtsync::views {

/// One control loop: owns a target model and a sync session over the shared
/// source model. triggerSync takes a single atomic journal snapshot at the
/// session cursor, so analysis always sees a consistent point-in-time view
/// regardless of what the runtime does meanwhile. The capability is derived
/// from the ruleset's target metamodel.
class AutonomicManager {
public:
    AutonomicManager(Model& source, const tgg::RuleSet& rules, ManagerConfig cfg);

    const std::string& name() const { return name_; }
    Model& view() { return view_; }
    const Model& view() const { return view_; }
    tgg::SyncSession& session() { return session_; }
    const tgg::SyncSession& session() const { return session_; }
    const ManagerConfig& config() const { return cfg_; }
    std::uint64_t lastSyncSeq() const { return lastSyncSeq_; }

    tgg::SyncReport triggerSync();
    std::vector<Finding> analyze(std::int64_t nowMs) const;

private:
    std::string name_;
    ManagerConfig cfg_;
    Model view_;
    tgg::SyncSession session_;
    std::uint64_t lastSyncSeq_ = 0;
};

} // namespace rtsync::views
