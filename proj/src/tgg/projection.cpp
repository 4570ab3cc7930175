#include "rtsync/tgg/projection.hpp"

#include "rtsync/errors.hpp"

namespace rtsync::tgg {

Model projectMapped(const Model& model, const CorrespondenceModel& corr, const RuleSet& rules,
                    Domain side) {
    if (side == Domain::Corr)
        throw ValidationError("projection side must be source or target");
    auto meta = side == Domain::Source ? rules.sourceMeta : rules.targetMeta;
    if (model.metaModel().name() != meta->name())
        throw ValidationError("model '" + model.id() + "' is not on the " + domainName(side) +
                              " side of ruleset '" + rules.name + "'");

    std::set<ElementId> included;
    std::map<ElementId, std::set<std::string>> keep;
    for (const auto& [cid, cn] : corr.corrNodes()) {
        const RuleApplication* app = corr.findApplication(cn.owner);
        if (!app) continue;
        const TggRule* rule = rules.findRule(app->ruleName);
        if (!rule) continue;
        const auto& ids = side == Domain::Source ? cn.sourceIds : cn.targetIds;
        for (ElementId id : ids) {
            included.insert(id);
            for (const auto& [var, bound] : app->binding) {
                if (bound != id) continue;
                const PatternElement* pe = rule->find(var);
                if (!pe || pe->domain != side || pe->kind != PatternKind::Node) continue;
                for (const AttributeConstraint& c : rule->constraints) {
                    if (c.direction != ConstraintDirection::Bidirectional) continue;
                    const auto* cp = std::get_if<ExprCopy>(&c.expr);
                    if (!cp) continue;
                    if (c.slotVar == var) keep[id].insert(c.slotAttr);
                    if (cp->var == var) keep[id].insert(cp->attr);
                }
            }
        }
    }

    Model out(model.id() + ".mapped", meta);
    for (const auto& [id, n] : model.nodes()) {
        if (!included.count(id)) continue;
        Node copy{id, n.type, {}};
        auto k = keep.find(id);
        if (k != keep.end()) {
            for (const std::string& a : k->second) {
                auto it = n.attributes.find(a);
                if (it != n.attributes.end()) copy.attributes[a] = it->second;
            }
        }
        out.insertNodeRaw(std::move(copy));
    }
    for (const auto& [id, e] : model.edges()) {
        if (!included.count(id)) continue;
        if (!out.findNode(e.source) || !out.findNode(e.target)) continue;
        out.insertEdgeRaw(e);
    }
    return out;
}

} // namespace rtsync::tgg
