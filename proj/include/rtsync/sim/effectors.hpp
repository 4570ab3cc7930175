#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rtsync/model/model.hpp"
#include "rtsync/sim/runtime.hpp"

namespace rtsync::sim {

struct EffectorEntry {
    std::uint64_t seq = 0;   // journal seq of the interpreted record
    std::string action;      // wire|unwire|remove-bean|undeploy|attribute|structure
    std::string status;      // applied|rejected|stale|ignored
    std::string detail;
};

struct EffectorReport {
    std::vector<EffectorEntry> entries;
    std::size_t applied = 0;
    std::size_t rejected = 0;
    std::size_t stale = 0;
    std::size_t ignored = 0;

    bool clean() const { return rejected == 0 && stale == 0; }
};

/// Translates a backward-sync batch on the EJB source model into runtime
/// actions. Supported records: wire edge created -> wire, wire edge
/// deleted -> unwire, bean node deleted -> remove bean, module node
/// deleted -> undeploy. Counter and history attributes are sensor-only and
/// are rejected; other structural records are rejected as unsupported.
/// Cascade companions of an interpreted deletion (the contained nodes and
/// edges journaled alongside it) are marked ignored. Records that name
/// runtime elements which no longer exist are marked stale, never thrown.
///
/// `source` is the model the batch was applied to, used to resolve element
/// ids that survived the batch; deleted elements resolve through the
/// snapshots the journal records carry.
EffectorReport applyEffector(Runtime& runtime, const Model& source, const ChangeBatch& batch);

std::string effectorReportJson(const EffectorReport& report);

} // namespace rtsync::sim
