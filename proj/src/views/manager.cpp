#include "rtsync/views/manager.hpp"

#include "rtsync/errors.hpp"

namespace rtsync::views {

namespace {

std::string capabilityFor(const tgg::RuleSet& rules) {
    const std::string& meta = rules.targetMeta->name();
    if (meta == "arch-view") return "architecture";
    if (meta == "perf-view") return "performance";
    if (meta == "fail-view") return "failure";
    return meta;
}

} // namespace

AutonomicManager::AutonomicManager(Model& source, const tgg::RuleSet& rules, ManagerConfig cfg)
    : name_(capabilityFor(rules)),
      cfg_(std::move(cfg)),
      view_(name_ + "-view", rules.targetMeta),
      session_(source, view_, rules) {}

tgg::SyncReport AutonomicManager::triggerSync() {
    ChangeBatch batch = session_.source().snapshotJournal(session_.sourceCursor());
    tgg::SyncReport report = session_.syncForward(batch);
    lastSyncSeq_ = session_.sourceCursor();
    return report;
}

std::vector<Finding> AutonomicManager::analyze(std::int64_t nowMs) const {
    if (name_ == "architecture") return checkArchConstraints(view_, cfg_, lastSyncSeq_);
    if (name_ == "performance") return analyzePerformance(view_, cfg_, lastSyncSeq_);
    if (name_ == "failure") return detectFailures(view_, cfg_, nowMs, lastSyncSeq_);
    throw ValidationError("manager '" + name_ + "' has no analysis");
}

} // namespace rtsync::views
