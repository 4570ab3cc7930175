#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "rtsync/model/value.hpp"

namespace rtsync::tgg {

/// Node of the correspondence graph: relates a set of source elements to a
/// set of target elements, owned by exactly one rule application.
struct CorrNode {
    ElementId id = 0;
    std::string type;
    std::set<ElementId> sourceIds, targetIds;
    std::uint64_t owner = 0;
};

struct RuleApplication {
    std::uint64_t id = 0;
    std::string ruleName;
    std::map<std::string, ElementId> binding; // var -> element/corr id
    std::set<ElementId> boundSource, boundTarget;
    std::set<ElementId> createdSource, createdTarget, createdCorr;
    std::set<std::string> materializedVars;
    std::set<std::uint64_t> dependsOn; // apps that created context bound here
};

/// Traceability store plus the indexes incremental sync needs: coverage
/// (element -> creating application), binding (element -> applications that
/// bound it), corr-by-linked-element, and the dependency graph.
class CorrespondenceModel {
public:
    const std::map<ElementId, CorrNode>& corrNodes() const { return corrNodes_; }
    const std::map<std::uint64_t, RuleApplication>& applications() const { return apps_; }
    const CorrNode* findCorr(ElementId id) const;
    const RuleApplication* findApplication(std::uint64_t id) const;

    /// Allocates a corr node id; the node is attached to the application
    /// recorded next (engine use).
    ElementId addCorrNode(std::string type, std::set<ElementId> sourceIds,
                          std::set<ElementId> targetIds);
    std::uint64_t recordApplication(RuleApplication app); // id assigned, corr owners patched
    void removeApplication(std::uint64_t id);             // erases owned corr nodes too

    const std::set<ElementId>& corrBySource(ElementId element) const;
    const std::set<ElementId>& corrByTarget(ElementId element) const;
    const std::set<std::uint64_t>& appsBindingSource(ElementId element) const;
    const std::set<std::uint64_t>& appsBindingTarget(ElementId element) const;
    const std::set<std::uint64_t>& dependentsOf(std::uint64_t app) const;

    std::optional<std::uint64_t> sourceCreator(ElementId element) const;
    std::optional<std::uint64_t> targetCreator(ElementId element) const;
    bool sourceCovered(ElementId element) const { return createdSourceOwner_.count(element) > 0; }
    bool targetCovered(ElementId element) const { return createdTargetOwner_.count(element) > 0; }

    // Raw state for serialization.
    ElementId nextCorrId() const { return nextCorrId_; }
    std::uint64_t nextAppId() const { return nextAppId_; }
    void restore(std::map<ElementId, CorrNode> corrNodes,
                 std::map<std::uint64_t, RuleApplication> apps, ElementId nextCorrId,
                 std::uint64_t nextAppId);

private:
    void indexApplication(const RuleApplication& app);

    std::map<ElementId, CorrNode> corrNodes_;
    std::map<std::uint64_t, RuleApplication> apps_;
    ElementId nextCorrId_ = 1;
    std::uint64_t nextAppId_ = 1;
    std::vector<ElementId> pendingCorr_; // corr ids awaiting their application

    std::map<ElementId, std::set<ElementId>> corrBySource_, corrByTarget_;
    std::map<ElementId, std::set<std::uint64_t>> bindingBySource_, bindingByTarget_;
    std::map<ElementId, std::uint64_t> createdSourceOwner_, createdTargetOwner_;
    std::map<std::uint64_t, std::set<std::uint64_t>> dependents_;
};

} // namespace rtsync::tgg
