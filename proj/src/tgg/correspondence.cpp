#include "rtsync/tgg/correspondence.hpp"

#include "rtsync/errors.hpp"

namespace rtsync::tgg {

namespace {
const std::set<ElementId> kNoElems;
const std::set<std::uint64_t> kNoApps;
} // namespace

const CorrNode* CorrespondenceModel::findCorr(ElementId id) const {
    auto it = corrNodes_.find(id);
    return it == corrNodes_.end() ? nullptr : &it->second;
}

const RuleApplication* CorrespondenceModel::findApplication(std::uint64_t id) const {
    auto it = apps_.find(id);
    return it == apps_.end() ? nullptr : &it->second;
}

ElementId CorrespondenceModel::addCorrNode(std::string type, std::set<ElementId> sourceIds,
                                           std::set<ElementId> targetIds) {
    CorrNode node;
    node.id = nextCorrId_++;
    node.type = std::move(type);
    node.sourceIds = std::move(sourceIds);
    node.targetIds = std::move(targetIds);
    for (ElementId s : node.sourceIds) corrBySource_[s].insert(node.id);
    for (ElementId t : node.targetIds) corrByTarget_[t].insert(node.id);
    ElementId id = node.id;
    corrNodes_.emplace(id, std::move(node));
    pendingCorr_.push_back(id);
    return id;
}

std::uint64_t CorrespondenceModel::recordApplication(RuleApplication app) {
    app.id = nextAppId_++;
    for (ElementId c : pendingCorr_) corrNodes_.at(c).owner = app.id;
    pendingCorr_.clear();
    indexApplication(app);
    std::uint64_t id = app.id;
    apps_.emplace(id, std::move(app));
    return id;
}

void CorrespondenceModel::indexApplication(const RuleApplication& app) {
    for (ElementId s : app.boundSource) bindingBySource_[s].insert(app.id);
    for (ElementId s : app.createdSource) {
        bindingBySource_[s].insert(app.id);
        if (!createdSourceOwner_.emplace(s, app.id).second)
            throw ValidationError("source element " + std::to_string(s) + " covered twice");
    }
    for (ElementId t : app.boundTarget) bindingByTarget_[t].insert(app.id);
    for (ElementId t : app.createdTarget) {
        bindingByTarget_[t].insert(app.id);
        if (!createdTargetOwner_.emplace(t, app.id).second)
            throw ValidationError("target element " + std::to_string(t) + " covered twice");
    }
    for (std::uint64_t d : app.dependsOn) dependents_[d].insert(app.id);
}

void CorrespondenceModel::removeApplication(std::uint64_t id) {
    auto it = apps_.find(id);
    if (it == apps_.end()) return;
    const RuleApplication& app = it->second;
    auto dropBinding = [](std::map<ElementId, std::set<std::uint64_t>>& index, ElementId e,
                          std::uint64_t a) {
        auto bit = index.find(e);
        if (bit == index.end()) return;
        bit->second.erase(a);
        if (bit->second.empty()) index.erase(bit);
    };
    for (ElementId s : app.boundSource) dropBinding(bindingBySource_, s, id);
    for (ElementId s : app.createdSource) {
        dropBinding(bindingBySource_, s, id);
        createdSourceOwner_.erase(s);
    }
    for (ElementId t : app.boundTarget) dropBinding(bindingByTarget_, t, id);
    for (ElementId t : app.createdTarget) {
        dropBinding(bindingByTarget_, t, id);
        createdTargetOwner_.erase(t);
    }
    for (std::uint64_t d : app.dependsOn) {
        auto dit = dependents_.find(d);
        if (dit != dependents_.end()) {
            dit->second.erase(id);
            if (dit->second.empty()) dependents_.erase(dit);
        }
    }
    dependents_.erase(id);
    for (ElementId c : app.createdCorr) {
        auto cit = corrNodes_.find(c);
        if (cit == corrNodes_.end()) continue;
        for (ElementId s : cit->second.sourceIds) {
            auto m = corrBySource_.find(s);
            if (m != corrBySource_.end()) {
                m->second.erase(c);
                if (m->second.empty()) corrBySource_.erase(m);
            }
        }
        for (ElementId t : cit->second.targetIds) {
            auto m = corrByTarget_.find(t);
            if (m != corrByTarget_.end()) {
                m->second.erase(c);
                if (m->second.empty()) corrByTarget_.erase(m);
            }
        }
        corrNodes_.erase(cit);
    }
    apps_.erase(it);
}

const std::set<ElementId>& CorrespondenceModel::corrBySource(ElementId element) const {
    auto it = corrBySource_.find(element);
    return it == corrBySource_.end() ? kNoElems : it->second;
}

const std::set<ElementId>& CorrespondenceModel::corrByTarget(ElementId element) const {
    auto it = corrByTarget_.find(element);
    return it == corrByTarget_.end() ? kNoElems : it->second;
}

const std::set<std::uint64_t>& CorrespondenceModel::appsBindingSource(ElementId element) const {
    auto it = bindingBySource_.find(element);
    return it == bindingBySource_.end() ? kNoApps : it->second;
}

const std::set<std::uint64_t>& CorrespondenceModel::appsBindingTarget(ElementId element) const {
    auto it = bindingByTarget_.find(element);
    return it == bindingByTarget_.end() ? kNoApps : it->second;
}

const std::set<std::uint64_t>& CorrespondenceModel::dependentsOf(std::uint64_t app) const {
    auto it = dependents_.find(app);
    return it == dependents_.end() ? kNoApps : it->second;
}

std::optional<std::uint64_t> CorrespondenceModel::sourceCreator(ElementId element) const {
    auto it = createdSourceOwner_.find(element);
    if (it == createdSourceOwner_.end()) return std::nullopt;
    return it->second;
}

std::optional<std::uint64_t> CorrespondenceModel::targetCreator(ElementId element) const {
    auto it = createdTargetOwner_.find(element);
    if (it == createdTargetOwner_.end()) return std::nullopt;
    return it->second;
}

void CorrespondenceModel::restore(std::map<ElementId, CorrNode> corrNodes,
                                  std::map<std::uint64_t, RuleApplication> apps,
                                  ElementId nextCorrId, std::uint64_t nextAppId) {
    corrNodes_ = std::move(corrNodes);
    apps_ = std::move(apps);
    nextCorrId_ = nextCorrId;
    nextAppId_ = nextAppId;
    pendingCorr_.clear();
    corrBySource_.clear();
    corrByTarget_.clear();
    bindingBySource_.clear();
    bindingByTarget_.clear();
    createdSourceOwner_.clear();
    createdTargetOwner_.clear();
    dependents_.clear();
    for (const auto& [id, node] : corrNodes_) {
        for (ElementId s : node.sourceIds) corrBySource_[s].insert(id);
        for (ElementId t : node.targetIds) corrByTarget_[t].insert(id);
        if (id >= nextCorrId_) throw ValidationError("corr id beyond nextCorrId");
        if (!apps_.count(node.owner))
            throw ValidationError("corr node " + std::to_string(id) + " owned by unknown app");
    }
    for (const auto& [id, app] : apps_) {
        if (id >= nextAppId_) throw ValidationError("application id beyond nextAppId");
        indexApplication(app);
    }
}

} // namespace rtsync::tgg
