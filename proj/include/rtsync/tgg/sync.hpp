#pragma once

#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "rtsync/model/model.hpp"
#include "rtsync/tgg/correspondence.hpp"
#include "rtsync/tgg/rule.hpp"

namespace rtsync::tgg {

struct SyncReport {
    std::vector<std::uint64_t> applicationsAdded;
    std::vector<std::uint64_t> applicationsRevoked;
    std::size_t created = 0;           // output-side elements created
    std::size_t deleted = 0;           // output-side elements deleted
    std::size_t attributesUpdated = 0; // output-side attribute assignments
    std::vector<ElementId> uncovered;  // input-side uncovered elements after sync
    std::size_t touchedElementCount = 0;

    bool quiet() const {
        return applicationsAdded.empty() && applicationsRevoked.empty() && created == 0 &&
               deleted == 0 && attributesUpdated == 0;
    }
};

struct ConsistencyFinding {
    std::uint64_t application = 0;
    std::string condition; // stable code
    std::string detail;
};

struct ConsistencyReport {
    std::vector<ConsistencyFinding> findings;
    bool ok() const { return findings.empty(); }
};

/// One (source, target, ruleset, cursors) pairing owned by one manager.
/// syncForward consumes source-journal batches, syncBackward target-journal
/// batches; both keep (target, corr) equivalent to a fresh batch transform
/// of the post-batch input. All backward source mutations form one
/// contiguous journal segment (single Writer). A sync advances its output
/// cursor past its own writes when no foreign records precede them, so an
/// opposite-direction batch taken right after starts clean.
class SyncSession {
public:
    /// Takes ownership of an existing correspondence model (e.g. from a
    /// batch transform); cursors say how much of each journal it reflects.
    SyncSession(Model& source, Model& target, const RuleSet& rules, CorrespondenceModel corr,
                std::uint64_t sourceCursor, std::uint64_t targetCursor);
    /// Fresh session over an empty target: first syncForward with a
    /// snapshot from cursor 0 performs the initial batch transform.
    SyncSession(Model& source, Model& target, const RuleSet& rules);

    SyncReport syncForward(const ChangeBatch& batch);
    SyncReport syncBackward(const ChangeBatch& batch);
    ConsistencyReport checkConsistency() const;

    Model& source() { return source_; }
    Model& target() { return target_; }
    const Model& source() const { return source_; }
    const Model& target() const { return target_; }
    const RuleSet& rules() const { return rules_; }
    const CorrespondenceModel& corr() const { return corr_; }
    std::uint64_t sourceCursor() const { return sourceCursor_; }
    std::uint64_t targetCursor() const { return targetCursor_; }

private:
    SyncReport syncDirected(const ChangeBatch& batch, Dir dir);
    void rebuildUncovered();

    Model& source_;
    Model& target_;
    const RuleSet& rules_;
    CorrespondenceModel corr_;
    std::uint64_t sourceCursor_ = 0;
    std::uint64_t targetCursor_ = 0;
    std::set<ElementId> uncoveredSource_, uncoveredTarget_;
};

} // namespace rtsync::tgg
