#include "rtsync/tgg/sync.hpp"

#include <algorithm>

#include "rtsync/errors.hpp"
#include "rtsync/tgg/engine.hpp"

namespace rtsync::tgg {

SyncSession::SyncSession(Model& source, Model& target, const RuleSet& rules,
                         CorrespondenceModel corr, std::uint64_t sourceCursor,
                         std::uint64_t targetCursor)
    : source_(source), target_(target), rules_(rules), corr_(std::move(corr)),
      sourceCursor_(sourceCursor), targetCursor_(targetCursor) {
    if (source_.metaModel().name() != rules_.sourceMeta->name())
        throw ValidationError("source model does not conform to the ruleset's source metamodel");
    if (target_.metaModel().name() != rules_.targetMeta->name())
        throw ValidationError("target model does not conform to the ruleset's target metamodel");
    rebuildUncovered();
}

SyncSession::SyncSession(Model& source, Model& target, const RuleSet& rules)
    : SyncSession(source, target, rules, CorrespondenceModel{}, 0, 0) {}

void SyncSession::rebuildUncovered() {
    uncoveredSource_.clear();
    uncoveredTarget_.clear();
    {
        auto rl = source_.readLock();
        for (const auto& [id, n] : source_.nodes())
            if (!corr_.sourceCovered(id)) uncoveredSource_.insert(id);
        for (const auto& [id, e] : source_.edges())
            if (!corr_.sourceCovered(id)) uncoveredSource_.insert(id);
    }
    {
        auto rl = target_.readLock();
        for (const auto& [id, n] : target_.nodes())
            if (!corr_.targetCovered(id)) uncoveredTarget_.insert(id);
        for (const auto& [id, e] : target_.edges())
            if (!corr_.targetCovered(id)) uncoveredTarget_.insert(id);
    }
}

SyncReport SyncSession::syncForward(const ChangeBatch& batch) {
    return syncDirected(batch, Dir::Forward);
}

SyncReport SyncSession::syncBackward(const ChangeBatch& batch) {
    return syncDirected(batch, Dir::Backward);
}

SyncReport SyncSession::syncDirected(const ChangeBatch& batch, Dir dir) {
    Model& input = dir == Dir::Forward ? source_ : target_;
    Model& output = dir == Dir::Forward ? target_ : source_;
    std::uint64_t& cursor = dir == Dir::Forward ? sourceCursor_ : targetCursor_;
    std::set<ElementId>& uncoveredInput = dir == Dir::Forward ? uncoveredSource_
                                                              : uncoveredTarget_;
    const TouchSet::Space inSpace = touchSpace(inputDomain(dir));
    const TouchSet::Space outSpace = touchSpace(outputDomain(dir));

    if (dir == Dir::Backward && !rules_.bidirectional())
        throw ValidationError("ruleset '" + rules_.name + "' does not support backward sync");
    if (batch.modelId != input.id())
        throw ValidationError("batch from model '" + batch.modelId + "' but the " +
                              dirName(dir) + " input is '" + input.id() + "'");
    if (batch.fromCursor != cursor)
        throw ValidationError("batch starts at cursor " + std::to_string(batch.fromCursor) +
                              ", session cursor is " + std::to_string(cursor));

    // a fresh session's first sync is the initial batch transform: consider
    // the whole uncovered input even when the journal says nothing (the
    // input may have been loaded without journaling)
    const bool initial = cursor == 0 && corr_.applications().empty();

    auto rl = input.readLock();
    auto w = output.write();

    TouchSet touch;
    SyncReport report;
    EngineContext ctx{rules_, dir, input, w, corr_, uncoveredInput, touch};

    auto coveredInput = [&](ElementId id) {
        return dir == Dir::Forward ? corr_.sourceCovered(id) : corr_.targetCovered(id);
    };

    std::set<ElementId> deletedIds, pool, attrElems;
    bool attrChanges = false;
    for (const ChangeRecord& r : batch.records) {
        switch (r.kind) {
        case ChangeKind::NodeCreated:
        case ChangeKind::EdgeCreated:
            deletedIds.erase(r.element);
            if (!coveredInput(r.element)) {
                uncoveredInput.insert(r.element);
                pool.insert(r.element);
            }
            break;
        case ChangeKind::NodeDeleted:
        case ChangeKind::EdgeDeleted:
            uncoveredInput.erase(r.element);
            pool.erase(r.element);
            deletedIds.insert(r.element);
            break;
        case ChangeKind::AttributeSet:
            attrChanges = true;
            attrElems.insert(r.element);
            break;
        }
    }

    // phase 1: recompute attribute constraints of touched applications.
    // Returns false when the application no longer holds and must go.
    auto recompute = [&](std::uint64_t appId) -> bool {
        const RuleApplication* app = corr_.findApplication(appId);
        if (!app) return true;
        const TggRule* rule = rules_.findRule(app->ruleName);
        if (!rule) return false;
        Binding b{app->binding, {}};
        try {
            for (const AttributeConstraint& c : rule->constraints) {
                bool assigns = constraintAssignsInDir(*rule, c, dir);
                if (!assigns && dir == Dir::Backward) {
                    const auto* cp = std::get_if<ExprCopy>(&c.expr);
                    assigns = cp && app->materializedVars.count(cp->var);
                }
                if (assigns) {
                    std::string outVar, outAttr;
                    AttrValue value;
                    if (dir == Dir::Forward) {
                        outVar = c.slotVar;
                        outAttr = c.slotAttr;
                        value = evalExpr(c.expr, *rule, b, source_, target_);
                    } else {
                        const auto& cp = std::get<ExprCopy>(c.expr);
                        outVar = cp.var;
                        outAttr = cp.attr;
                        value = boundAttr(*rule, b, c.slotVar, c.slotAttr, source_, target_);
                    }
                    ElementId outId = app->binding.at(outVar);
                    const Node* n = output.findNode(outId);
                    if (!n) return false;
                    touch.add(outSpace, outId);
                    auto it = n->attributes.find(outAttr);
                    if (it == n->attributes.end() || !(it->second == value)) {
                        w.apply(SetAttribute{outId, outAttr, value});
                        ++report.attributesUpdated;
                    }
                } else {
                    AttrValue slot = boundAttr(*rule, b, c.slotVar, c.slotAttr, source_,
                                               target_);
                    touch.add(touchSpace(rule->element(c.slotVar).domain),
                              app->binding.at(c.slotVar));
                    if (!(slot == evalExpr(c.expr, *rule, b, source_, target_))) return false;
                }
            }
        } catch (const Error&) {
            return false; // a bound element vanished in this batch
        }
        return true;
    };

    std::set<std::uint64_t> seeds;
    for (ElementId elem : attrElems) {
        touch.add(inSpace, elem);
        const auto& apps = dir == Dir::Forward ? corr_.appsBindingSource(elem)
                                               : corr_.appsBindingTarget(elem);
        for (std::uint64_t appId : apps) {
            if (!recompute(appId)) seeds.insert(appId);
        }
    }

    // phase 2: revoke applications invalidated by deletions or broken
    // filters, dependents first (descending id is a topological order)
    for (ElementId d : deletedIds) {
        const auto& apps = dir == Dir::Forward ? corr_.appsBindingSource(d)
                                               : corr_.appsBindingTarget(d);
        seeds.insert(apps.begin(), apps.end());
    }
    {
        std::vector<std::uint64_t> grow(seeds.begin(), seeds.end());
        while (!grow.empty()) {
            std::uint64_t a = grow.back();
            grow.pop_back();
            for (std::uint64_t dep : corr_.dependentsOf(a))
                if (seeds.insert(dep).second) grow.push_back(dep);
        }
    }
    for (auto it = seeds.rbegin(); it != seeds.rend(); ++it) {
        const std::uint64_t appId = *it;
        const RuleApplication* app = corr_.findApplication(appId);
        if (!app) continue;
        const std::set<ElementId>& outCreated = dir == Dir::Forward ? app->createdTarget
                                                                    : app->createdSource;
        std::vector<ElementId> delEdges, delNodes;
        for (ElementId id : outCreated) {
            if (output.findEdge(id)) delEdges.push_back(id);
            else if (output.findNode(id)) delNodes.push_back(id);
        }
        for (ElementId e : delEdges) {
            if (!output.findEdge(e)) continue;
            w.apply(DeleteEdge{e});
            ++report.deleted;
            touch.add(outSpace, e);
        }
        for (ElementId n : delNodes) {
            if (!output.findNode(n)) continue; // containment cascade may have taken it
            w.apply(DeleteNode{n});
            ++report.deleted;
            touch.add(outSpace, n);
        }
        const std::set<ElementId>& inCreated = dir == Dir::Forward ? app->createdSource
                                                                   : app->createdTarget;
        for (ElementId id : inCreated) {
            if (input.findNode(id) || input.findEdge(id)) {
                uncoveredInput.insert(id);
                pool.insert(id);
            }
        }
        corr_.removeApplication(appId);
        report.applicationsRevoked.push_back(appId);
    }

    // phase 3: retranslate around the pool. Attribute changes can unlock
    // matches anywhere (filters), so they widen the pool to everything
    // still uncovered.
    if (attrChanges || initial) pool.insert(uncoveredInput.begin(), uncoveredInput.end());
    if (!pool.empty()) {
        std::vector<ElementId> grow(pool.begin(), pool.end());
        while (!grow.empty()) {
            ElementId id = grow.back();
            grow.pop_back();
            if (const Edge* e = input.findEdge(id)) {
                for (ElementId end : {e->source, e->target})
                    if (uncoveredInput.count(end) && pool.insert(end).second)
                        grow.push_back(end);
            } else if (input.findNode(id)) {
                for (ElementId inc : input.incidentEdges(id))
                    if (uncoveredInput.count(inc) && pool.insert(inc).second)
                        grow.push_back(inc);
            }
        }
        report.applicationsAdded = runToFixpoint(ctx, &pool);
        report.created = ctx.createdCount;
    }

    cursor = batch.toCursor;
    // the session has already seen everything it wrote itself: advance the
    // output cursor over its own segment, unless foreign records are still
    // pending in front of it
    std::uint64_t& outCursor = dir == Dir::Forward ? targetCursor_ : sourceCursor_;
    if (outCursor == w.baseSeq()) outCursor = w.lastSeq();
    report.uncovered.assign(uncoveredInput.begin(), uncoveredInput.end());
    report.touchedElementCount = touch.size();
    return report;
}

ConsistencyReport SyncSession::checkConsistency() const {
    ConsistencyReport rep;
    auto rls = source_.readLock();
    auto rlt = target_.readLock();
    for (const auto& [appId, app] : corr_.applications()) {
        auto flag = [&](const std::string& condition, const std::string& detail) {
            rep.findings.push_back({appId, condition, detail});
        };
        const TggRule* rule = rules_.findRule(app.ruleName);
        if (!rule) {
            flag("unknown-rule", app.ruleName);
            continue;
        }
        bool structureOk = true;
        for (const PatternElement& pe : rule->elements) {
            if (pe.domain == Domain::Corr && pe.kind == PatternKind::Edge) continue;
            auto bit = app.binding.find(pe.var);
            if (bit == app.binding.end()) {
                flag("unbound-var", pe.var);
                structureOk = false;
                continue;
            }
            ElementId id = bit->second;
            if (pe.domain == Domain::Corr) {
                const CorrNode* cn = corr_.findCorr(id);
                if (!cn) {
                    flag("missing-element", pe.var + " -> corr " + std::to_string(id));
                    structureOk = false;
                } else if (cn->type != pe.type) {
                    flag("type-mismatch", pe.var);
                    structureOk = false;
                }
                continue;
            }
            const Model& m = pe.domain == Domain::Source ? source_ : target_;
            if (pe.kind == PatternKind::Node) {
                const Node* n = m.findNode(id);
                if (!n) {
                    flag("missing-element", pe.var + " -> " + std::to_string(id));
                    structureOk = false;
                } else if (!m.metaModel().isSubtypeOf(n->type, pe.type)) {
                    flag("type-mismatch", pe.var + " is " + n->type);
                    structureOk = false;
                }
            } else {
                const Edge* e = m.findEdge(id);
                if (!e) {
                    flag("missing-element", pe.var + " -> " + std::to_string(id));
                    structureOk = false;
                } else if (e->type != pe.type) {
                    flag("type-mismatch", pe.var + " is " + e->type);
                    structureOk = false;
                } else {
                    auto endBound = [&](const std::string& var) {
                        auto it = app.binding.find(var);
                        return it == app.binding.end() ? ElementId(0) : it->second;
                    };
                    if (e->source != endBound(pe.src) || e->target != endBound(pe.dst)) {
                        flag("broken-edge", pe.var);
                        structureOk = false;
                    }
                }
            }
        }
        // declared links must be reflected in the owned corr nodes
        for (const PatternElement& pe : rule->elements) {
            if (pe.domain != Domain::Corr || pe.kind != PatternKind::Node ||
                pe.marking != Marking::Created)
                continue;
            auto bit = app.binding.find(pe.var);
            if (bit == app.binding.end()) continue;
            const CorrNode* cn = corr_.findCorr(bit->second);
            if (!cn) continue;
            if (cn->owner != appId) flag("corr-dangling", pe.var + " owned elsewhere");
            for (const PatternElement& l : rule->elements) {
                if (l.domain != Domain::Corr || l.kind != PatternKind::Edge || l.src != pe.var)
                    continue;
                auto far = app.binding.find(l.dst);
                if (far == app.binding.end()) continue;
                const auto& side = rule->element(l.dst).domain == Domain::Source ? cn->sourceIds
                                                                                 : cn->targetIds;
                if (!side.count(far->second))
                    flag("corr-dangling", pe.var + " misses link to " + l.dst);
            }
        }
        if (structureOk) {
            Binding b{app.binding, {}};
            for (const AttributeConstraint& c : rule->constraints) {
                try {
                    AttrValue slot = boundAttr(*rule, b, c.slotVar, c.slotAttr, source_,
                                               target_);
                    if (!(slot == evalExpr(c.expr, *rule, b, source_, target_)))
                        flag("constraint-violated", c.slotVar + "." + c.slotAttr);
                } catch (const Error& e) {
                    flag("constraint-violated", std::string(e.what()));
                }
            }
        }
        for (std::uint64_t dep : app.dependsOn) {
            if (!corr_.findApplication(dep))
                flag("missing-dependency", std::to_string(dep));
        }
    }
    return rep;
}

} // namespace rtsync::tgg
