#include "rtsync/tgg/match.hpp"

#include <algorithm>
#include <limits>

#include "rtsync/errors.hpp"

namespace rtsync::tgg {

namespace {

double numeric(const AttrValue& v) {
    if (const auto* i = std::get_if<std::int64_t>(&v)) return double(*i);
    if (const auto* d = std::get_if<double>(&v)) return *d;
    throw ValidationError("numeric expression over a non-numeric attribute");
}

struct Matcher {
    const TggRule& rule;
    const SearchPlan& plan;
    Dir dir;
    const Model& source;
    const Model& target;
    const CorrespondenceModel& corr;
    std::optional<ElementId> anchor;
    TouchSet* touch;
    std::size_t limit;

    Binding binding;
    std::vector<Binding> results;
    ElementId nextVirtual = std::numeric_limits<ElementId>::max();

    const Model& modelFor(Domain d) const { return d == Domain::Source ? source : target; }

    void note(Domain d, ElementId id) {
        if (touch) touch->add(touchSpace(d), id);
    }

    std::vector<ElementId> candidatesFor(const MatchStep& step, const PatternElement& pe) const {
        switch (step.kind) {
        case StepKind::Anchor: {
            if (anchor) return {*anchor};
            const Model& m = modelFor(pe.domain);
            std::vector<ElementId> out;
            if (pe.kind == PatternKind::Node) {
                for (const auto& sub : m.metaModel().concreteSubtypes(pe.type)) {
                    const auto& ids = m.nodesOfType(sub);
                    out.insert(out.end(), ids.begin(), ids.end());
                }
                std::sort(out.begin(), out.end());
            } else {
                const auto& ids = m.edgesOfType(pe.type);
                out.assign(ids.begin(), ids.end());
            }
            return out;
        }
        case StepKind::BindEndpoint: {
            const PatternElement& via = rule.elements[step.via];
            ElementId edgeId = binding.vars.at(via.var);
            if (binding.materialized.count(via.var)) {
                const std::string& endVar = step.sourceEnd ? via.src : via.dst;
                return {binding.vars.at(endVar)};
            }
            const Edge* e = modelFor(via.domain).findEdge(edgeId);
            if (!e) return {};
            return {step.sourceEnd ? e->source : e->target};
        }
        case StepKind::ExtendOut:
        case StepKind::ExtendIn: {
            const PatternElement& via = rule.elements[step.via];
            ElementId nodeId = binding.vars.at(via.var);
            const Model& m = modelFor(pe.domain);
            const auto& ids = step.kind == StepKind::ExtendOut ? m.outEdges(nodeId, pe.type)
                                                               : m.inEdges(nodeId, pe.type);
            return {ids.begin(), ids.end()};
        }
        case StepKind::CorrFromLinked: {
            const PatternElement& link = rule.elements[step.via];
            const PatternElement& far = rule.element(link.dst);
            ElementId farId = binding.vars.at(link.dst);
            const auto& ids = far.domain == Domain::Source ? corr.corrBySource(farId)
                                                           : corr.corrByTarget(farId);
            return {ids.begin(), ids.end()};
        }
        case StepKind::LinkedFromCorr: {
            const PatternElement& link = rule.elements[step.via];
            const CorrNode* c = corr.findCorr(binding.vars.at(link.src));
            if (!c) return {};
            const auto& ids = pe.domain == Domain::Source ? c->sourceIds : c->targetIds;
            return {ids.begin(), ids.end()};
        }
        }
        return {};
    }

    /// Existence, type and already-bound-neighbour consistency. Injectivity
    /// and coverage are judged separately so they never trigger
    /// materialization.
    bool structuralOk(const PatternElement& pe, ElementId id) const {
        if (pe.domain == Domain::Corr) {
            const CorrNode* c = corr.findCorr(id);
            if (!c || c->type != pe.type) return false;
            for (const PatternElement& l : rule.elements) {
                if (l.domain != Domain::Corr || l.kind != PatternKind::Edge || l.src != pe.var)
                    continue;
                auto it = binding.vars.find(l.dst);
                if (it == binding.vars.end()) continue; // bound later by its own step
                const auto& side = rule.element(l.dst).domain == Domain::Source ? c->sourceIds
                                                                                : c->targetIds;
                if (!side.count(it->second)) return false;
            }
            return true;
        }
        const Model& m = modelFor(pe.domain);
        if (pe.kind == PatternKind::Node) {
            const Node* n = m.findNode(id);
            return n && m.metaModel().isSubtypeOf(n->type, pe.type);
        }
        const Edge* e = m.findEdge(id);
        if (!e || e->type != pe.type) return false;
        auto endOk = [&](const std::string& var, ElementId end) {
            auto it = binding.vars.find(var);
            return it == binding.vars.end() || it->second == end;
        };
        return endOk(pe.src, e->source) && endOk(pe.dst, e->target);
    }

    bool coverageOk(const PatternElement& pe, ElementId id) const {
        if (pe.domain != inputDomain(dir)) return true;
        bool covered = dir == Dir::Forward ? corr.sourceCovered(id) : corr.targetCovered(id);
        return pe.marking == Marking::Created ? !covered : covered;
    }

    bool injective(const PatternElement& pe, ElementId id) const {
        for (const auto& [var, bound] : binding.vars) {
            if (bound == id && rule.element(var).domain == pe.domain) return false;
        }
        return true;
    }

    bool dynamicAssign(const AttributeConstraint& c) const {
        if (dir != Dir::Backward) return false;
        const auto* cp = std::get_if<ExprCopy>(&c.expr);
        return cp && binding.materialized.count(cp->var);
    }

    bool filtersHold() const {
        for (const AttributeConstraint& c : rule.constraints) {
            if (constraintAssignsInDir(rule, c, dir) || dynamicAssign(c)) continue;
            AttrValue slot = boundAttr(rule, binding, c.slotVar, c.slotAttr, source, target);
            if (!(slot == evalExpr(c.expr, rule, binding, source, target))) return false;
        }
        return true;
    }

    std::vector<std::string> materialize(const MatchStep& step, const PatternElement& pe) {
        std::vector<std::string> added;
        if (pe.kind == PatternKind::Edge) {
            const std::string& otherVar = step.kind == StepKind::ExtendOut ? pe.dst : pe.src;
            if (!binding.vars.count(otherVar)) {
                binding.vars[otherVar] = nextVirtual--;
                binding.materialized.insert(otherVar);
                added.push_back(otherVar);
            }
        }
        binding.vars[pe.var] = nextVirtual--;
        binding.materialized.insert(pe.var);
        added.push_back(pe.var);
        return added;
    }

    bool matchFrom(std::size_t stepIdx) { // true = limit reached, unwind
        if (stepIdx == plan.steps.size()) {
            if (filtersHold()) {
                results.push_back(binding);
                if (limit && results.size() >= limit) return true;
            }
            return false;
        }
        const MatchStep& step = plan.steps[stepIdx];
        const PatternElement& pe = rule.elements[step.elem];

        if (auto it = binding.vars.find(pe.var); it != binding.vars.end()) {
            // pre-bound during a materialization; re-derive and verify
            std::vector<ElementId> cands = candidatesFor(step, pe);
            if (std::find(cands.begin(), cands.end(), it->second) == cands.end()) return false;
            return matchFrom(stepIdx + 1);
        }

        std::vector<ElementId> typed;
        for (ElementId id : candidatesFor(step, pe)) {
            note(pe.domain, id);
            if (structuralOk(pe, id)) typed.push_back(id);
        }
        if (typed.empty() && step.materializable && dir == Dir::Backward) {
            std::vector<std::string> added = materialize(step, pe);
            bool stop = matchFrom(stepIdx + 1);
            for (const auto& v : added) {
                binding.vars.erase(v);
                binding.materialized.erase(v);
            }
            return stop;
        }
        for (ElementId id : typed) {
            if (!coverageOk(pe, id) || !injective(pe, id)) continue;
            binding.vars[pe.var] = id;
            bool stop = matchFrom(stepIdx + 1);
            binding.vars.erase(pe.var);
            if (stop) return true;
        }
        return false;
    }
};

} // namespace

std::vector<Binding> matchRule(const TggRule& rule, const SearchPlan& plan, Dir dir,
                               const Model& input, const Model& output,
                               const CorrespondenceModel& corr, std::optional<ElementId> anchor,
                               TouchSet* touch, std::size_t limit) {
    if (!plan.applicable)
        throw ValidationError("rule '" + rule.name + "' is not applicable " + dirName(dir));
    if (plan.dir != dir)
        throw ValidationError("search plan direction mismatch for rule '" + rule.name + "'");
    const Model& source = dir == Dir::Forward ? input : output;
    const Model& target = dir == Dir::Forward ? output : input;
    Matcher m{rule, plan, dir, source, target, corr, anchor, touch, limit, {}, {}, {}};
    m.nextVirtual = std::numeric_limits<ElementId>::max();
    m.matchFrom(0);
    return std::move(m.results);
}

bool constraintAssignsInDir(const TggRule& rule, const AttributeConstraint& c, Dir dir) {
    if (dir == Dir::Forward) {
        const PatternElement& slot = rule.element(c.slotVar);
        return slot.domain == Domain::Target && slot.marking == Marking::Created;
    }
    const auto* cp = std::get_if<ExprCopy>(&c.expr);
    if (!cp) return false;
    const PatternElement& from = rule.element(cp->var);
    return from.domain == Domain::Source && from.marking == Marking::Created;
}

AttrValue boundAttr(const TggRule& rule, const Binding& binding, const std::string& var,
                    const std::string& attr, const Model& source, const Model& target) {
    if (binding.materialized.count(var)) {
        for (const auto& d : rule.backwardDefaults) {
            if (d.var == var && d.attr == attr) return d.value;
        }
        throw ValidationError("materialized var '" + var + "' lacks a default for '" + attr +
                              "'");
    }
    const PatternElement& pe = rule.element(var);
    const Model& m = pe.domain == Domain::Source ? source : target;
    const Node* n = m.findNode(binding.vars.at(var));
    if (!n) throw ValidationError("bound element missing for var '" + var + "'");
    auto it = n->attributes.find(attr);
    if (it == n->attributes.end())
        throw ValidationError("element bound to '" + var + "' lacks attribute '" + attr + "'");
    return it->second;
}

AttrValue evalExpr(const AttrExpr& expr, const TggRule& rule, const Binding& binding,
                   const Model& source, const Model& target) {
    if (const auto* k = std::get_if<ExprConst>(&expr)) return k->value;
    if (const auto* c = std::get_if<ExprCopy>(&expr))
        return boundAttr(rule, binding, c->var, c->attr, source, target);
    if (const auto* a = std::get_if<ExprAffine>(&expr))
        return AttrValue(a->a * numeric(boundAttr(rule, binding, a->var, a->attr, source,
                                                  target)) +
                         a->b);
    const auto& r = std::get<ExprRatio>(expr);
    double num = numeric(boundAttr(rule, binding, r.numVar, r.numAttr, source, target));
    double den = std::max(numeric(boundAttr(rule, binding, r.denVar, r.denAttr, source, target)),
                          1.0);
    return AttrValue(num / den);
}

} // namespace rtsync::tgg
