#include "rtsync/tgg/engine.hpp"

#include <algorithm>

#include "rtsync/errors.hpp"
#include "rtsync/tgg/transform.hpp"

namespace rtsync::tgg {

namespace {

AttrValue computeAttr(const TggRule& rule, const Binding& b, const std::string& var,
                      const std::string& attr, Dir dir, const Model& source,
                      const Model& target) {
    if (dir == Dir::Forward) {
        for (const AttributeConstraint& c : rule.constraints) {
            if (c.slotVar == var && c.slotAttr == attr)
                return evalExpr(c.expr, rule, b, source, target);
        }
    } else {
        for (const BackwardDefault& d : rule.backwardDefaults) {
            if (d.var == var && d.attr == attr) return d.value;
        }
        for (const AttributeConstraint& c : rule.constraints) {
            const auto* cp = std::get_if<ExprCopy>(&c.expr);
            if (cp && cp->var == var && cp->attr == attr)
                return boundAttr(rule, b, c.slotVar, c.slotAttr, source, target);
        }
    }
    // unreachable after ruleset validation (totality)
    throw ValidationError("rule '" + rule.name + "': no way to compute '" + var + "." + attr +
                          "' " + dirName(dir));
}

} // namespace

std::uint64_t applyBinding(EngineContext& ctx, const TggRule& rule, Binding b) {
    const Domain outDom = outputDomain(ctx.dir);
    const Domain inDom = inputDomain(ctx.dir);
    const MetaModel& outMeta = outDom == Domain::Source ? *ctx.rules.sourceMeta
                                                        : *ctx.rules.targetMeta;
    RuleApplication app;
    app.ruleName = rule.name;

    auto outCreated = [&]() -> std::set<ElementId>& {
        return outDom == Domain::Source ? app.createdSource : app.createdTarget;
    };

    // materialized context elements become real first: nodes with their
    // defaults, then the edges between them
    for (const PatternElement& pe : rule.elements) {
        if (pe.kind != PatternKind::Node || !b.materialized.count(pe.var)) continue;
        AttributeMap attrs;
        for (const BackwardDefault& d : rule.backwardDefaults) {
            if (d.var == pe.var) attrs[d.attr] = d.value;
        }
        ChangeRecord rec = ctx.out.apply(CreateNode{pe.type, std::move(attrs)});
        b.vars[pe.var] = rec.element;
        app.materializedVars.insert(pe.var);
        outCreated().insert(rec.element);
        ctx.touch.add(touchSpace(outDom), rec.element);
        ++ctx.createdCount;
    }
    for (const PatternElement& pe : rule.elements) {
        if (pe.kind != PatternKind::Edge || !b.materialized.count(pe.var)) continue;
        ChangeRecord rec =
            ctx.out.apply(CreateEdge{pe.type, b.vars.at(pe.src), b.vars.at(pe.dst)});
        b.vars[pe.var] = rec.element;
        app.materializedVars.insert(pe.var);
        outCreated().insert(rec.element);
        ctx.touch.add(touchSpace(outDom), rec.element);
        ++ctx.createdCount;
    }
    b.materialized.clear(); // everything is concrete from here on

    const Model& source = ctx.dir == Dir::Forward ? ctx.input : ctx.out.model();
    const Model& target = ctx.dir == Dir::Forward ? ctx.out.model() : ctx.input;

    // created output nodes, attributes per the direction's assignments
    for (const PatternElement& pe : rule.elements) {
        if (pe.domain != outDom || pe.marking != Marking::Created ||
            pe.kind != PatternKind::Node)
            continue;
        AttributeMap attrs;
        for (const auto& [attr, def] : outMeta.flatAttributes(pe.type))
            attrs[attr] = computeAttr(rule, b, pe.var, attr, ctx.dir, source, target);
        ChangeRecord rec = ctx.out.apply(CreateNode{pe.type, std::move(attrs)});
        b.vars[pe.var] = rec.element;
        outCreated().insert(rec.element);
        ctx.touch.add(touchSpace(outDom), rec.element);
        ++ctx.createdCount;
    }
    // created output edges
    for (const PatternElement& pe : rule.elements) {
        if (pe.domain != outDom || pe.marking != Marking::Created ||
            pe.kind != PatternKind::Edge)
            continue;
        ChangeRecord rec =
            ctx.out.apply(CreateEdge{pe.type, b.vars.at(pe.src), b.vars.at(pe.dst)});
        b.vars[pe.var] = rec.element;
        outCreated().insert(rec.element);
        ctx.touch.add(touchSpace(outDom), rec.element);
        ++ctx.createdCount;
    }

    // copy constraints may override a materialized element's defaults
    if (ctx.dir == Dir::Backward) {
        for (const AttributeConstraint& c : rule.constraints) {
            const auto* cp = std::get_if<ExprCopy>(&c.expr);
            if (!cp || !app.materializedVars.count(cp->var)) continue;
            AttrValue v = boundAttr(rule, b, c.slotVar, c.slotAttr, source, target);
            ctx.out.apply(SetAttribute{b.vars.at(cp->var), cp->attr, v});
        }
    }

    // corr nodes, linked sets straight from the declared links
    for (const PatternElement& pe : rule.elements) {
        if (pe.domain != Domain::Corr || pe.kind != PatternKind::Node ||
            pe.marking != Marking::Created)
            continue;
        std::set<ElementId> s, t;
        for (const PatternElement& l : rule.elements) {
            if (l.domain != Domain::Corr || l.kind != PatternKind::Edge || l.src != pe.var)
                continue;
            (rule.element(l.dst).domain == Domain::Source ? s : t).insert(b.vars.at(l.dst));
        }
        ElementId cid = ctx.corr.addCorrNode(pe.type, std::move(s), std::move(t));
        b.vars[pe.var] = cid;
        app.createdCorr.insert(cid);
        ctx.touch.add(TouchSet::CorrSpace, cid);
    }

    // record coverage, context bindings and dependencies
    for (const PatternElement& pe : rule.elements) {
        if (pe.domain == Domain::Corr) {
            if (pe.kind == PatternKind::Node && pe.marking == Marking::Context) {
                if (const CorrNode* cn = ctx.corr.findCorr(b.vars.at(pe.var)))
                    app.dependsOn.insert(cn->owner);
            }
            continue;
        }
        if (app.materializedVars.count(pe.var)) continue;
        ElementId id = b.vars.at(pe.var);
        if (pe.marking == Marking::Created) {
            if (pe.domain == inDom)
                (inDom == Domain::Source ? app.createdSource : app.createdTarget).insert(id);
        } else {
            (pe.domain == Domain::Source ? app.boundSource : app.boundTarget).insert(id);
            auto creator = pe.domain == Domain::Source ? ctx.corr.sourceCreator(id)
                                                       : ctx.corr.targetCreator(id);
            if (creator) app.dependsOn.insert(*creator);
        }
    }
    app.binding = b.vars;

    for (ElementId id : inDom == Domain::Source ? app.createdSource : app.createdTarget)
        ctx.uncoveredInput.erase(id);

    return ctx.corr.recordApplication(std::move(app));
}

std::vector<std::uint64_t> runToFixpoint(EngineContext& ctx, const std::set<ElementId>* pool) {
    std::vector<std::uint64_t> out;
    std::vector<std::pair<const TggRule*, SearchPlan>> plans;
    for (const TggRule& r : ctx.rules.rules) {
        SearchPlan p = buildSearchPlan(r, ctx.dir);
        if (p.applicable) plans.emplace_back(&r, std::move(p));
    }
    const MetaModel& inMeta = inputDomain(ctx.dir) == Domain::Source ? *ctx.rules.sourceMeta
                                                                     : *ctx.rules.targetMeta;
    bool progress = true;
    while (progress) {
        progress = false;
        for (auto& [rule, plan] : plans) {
            const PatternElement& anchorPe = rule->elements[plan.steps.front().elem];
            std::vector<ElementId> anchors;
            for (ElementId id : pool ? *pool : ctx.uncoveredInput) {
                if (pool && !ctx.uncoveredInput.count(id)) continue;
                if (anchorPe.kind == PatternKind::Node) {
                    const Node* n = ctx.input.findNode(id);
                    if (!n || !inMeta.isSubtypeOf(n->type, anchorPe.type)) continue;
                } else {
                    const Edge* e = ctx.input.findEdge(id);
                    if (!e || e->type != anchorPe.type) continue;
                }
                anchors.push_back(id);
            }
            for (ElementId a : anchors) {
                if (!ctx.uncoveredInput.count(a)) continue; // claimed earlier this pass
                auto bindings = matchRule(*rule, plan, ctx.dir, ctx.input, ctx.out.model(),
                                          ctx.corr, a, &ctx.touch, 1);
                if (bindings.empty()) continue;
                out.push_back(applyBinding(ctx, *rule, std::move(bindings.front())));
                progress = true;
            }
        }
    }
    return out;
}

} // namespace rtsync::tgg
