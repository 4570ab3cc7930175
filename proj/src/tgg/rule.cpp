#include "rtsync/tgg/rule.hpp"

#include <algorithm>
#include <set>

#include "rtsync/errors.hpp"
#include "rtsync/tgg/search_plan.hpp"

namespace rtsync::tgg {

const char* domainName(Domain d) {
    switch (d) {
    case Domain::Source: return "source";
    case Domain::Corr: return "corr";
    case Domain::Target: return "target";
    }
    return "?";
}

const char* markingName(Marking m) { return m == Marking::Context ? "context" : "created"; }
const char* dirName(Dir d) { return d == Dir::Forward ? "forward" : "backward"; }

const PatternElement& TggRule::element(const std::string& var) const {
    auto it = varIndex.find(var);
    if (it == varIndex.end())
        throw ValidationError("rule '" + name + "': unknown var '" + var + "'");
    return elements[it->second];
}

const PatternElement* TggRule::find(const std::string& var) const {
    auto it = varIndex.find(var);
    return it == varIndex.end() ? nullptr : &elements[it->second];
}

bool TggRule::hasDefaultFor(const std::string& var, const std::string& attr) const {
    for (const auto& d : backwardDefaults) {
        if (d.var == var && d.attr == attr) return true;
    }
    return false;
}

bool TggRule::materializable(const std::string& var) const {
    const PatternElement* pe = find(var);
    if (!pe || pe->domain != Domain::Source || pe->marking != Marking::Context ||
        pe->kind != PatternKind::Node)
        return false;
    for (const auto& d : backwardDefaults) {
        if (d.var == var) return true;
    }
    return false;
}

const TggRule* RuleSet::findRule(const std::string& ruleName) const {
    for (const auto& r : rules) {
        if (r.name == ruleName) return &r;
    }
    return nullptr;
}

namespace {

using Ctx = std::string; // error prefix

[[noreturn]] void fail(const Ctx& ctx, const std::string& msg) {
    throw ValidationError(ctx + ": " + msg);
}

const MetaModel& metaFor(const RuleSet& rs, Domain d) {
    return d == Domain::Source ? *rs.sourceMeta : *rs.targetMeta;
}

bool typesRelated(const MetaModel& mm, const std::string& a, const std::string& b) {
    return mm.isSubtypeOf(a, b) || mm.isSubtypeOf(b, a);
}

void validateElements(const RuleSet& rs, TggRule& rule, const Ctx& ctx) {
    rule.varIndex.clear();
    for (std::size_t i = 0; i < rule.elements.size(); ++i) {
        const PatternElement& pe = rule.elements[i];
        if (pe.var.empty()) fail(ctx, "element with empty var name");
        if (!rule.varIndex.emplace(pe.var, i).second) fail(ctx, "duplicate var '" + pe.var + "'");
    }

    for (const PatternElement& pe : rule.elements) {
        const Ctx ectx = ctx + ", var '" + pe.var + "'";
        if (pe.domain == Domain::Corr) {
            if (pe.kind == PatternKind::Node) {
                if (std::find(rs.corrTypes.begin(), rs.corrTypes.end(), pe.type) ==
                    rs.corrTypes.end())
                    fail(ectx, "undeclared corr type '" + pe.type + "'");
            } else {
                if (pe.type != "link") fail(ectx, "corr edges must have type 'link'");
                const PatternElement* src = rule.find(pe.src);
                const PatternElement* dst = rule.find(pe.dst);
                if (!src || !dst) fail(ectx, "link endpoints must name rule vars");
                if (src->domain != Domain::Corr || src->kind != PatternKind::Node)
                    fail(ectx, "link source must be a corr node");
                if (dst->domain == Domain::Corr)
                    fail(ectx, "correspondence links only reach source or target elements");
                if (pe.marking != src->marking)
                    fail(ectx, "link marking must match its corr node");
            }
            continue;
        }

        const MetaModel& mm = metaFor(rs, pe.domain);
        if (pe.kind == PatternKind::Node) {
            const NodeType* nt = mm.findNodeType(pe.type);
            if (!nt) fail(ectx, "unknown node type '" + pe.type + "'");
            // created vars are instantiated in the direction that outputs
            // their domain; forward-only rulesets never instantiate source
            if (pe.marking == Marking::Created && nt->abstractFlag &&
                (pe.domain == Domain::Target || rs.bidirectional()))
                fail(ectx, "created node type '" + pe.type + "' is abstract");
        } else {
            const EdgeType* et = mm.findEdgeType(pe.type);
            if (!et) fail(ectx, "unknown edge type '" + pe.type + "'");
            const PatternElement* src = rule.find(pe.src);
            const PatternElement* dst = rule.find(pe.dst);
            if (!src || !dst) fail(ectx, "edge endpoints must name rule vars");
            if (src->domain != pe.domain || dst->domain != pe.domain)
                fail(ectx, "edge endpoints must stay in the edge's domain");
            if (src->kind != PatternKind::Node || dst->kind != PatternKind::Node)
                fail(ectx, "edge endpoints must be nodes");
            if (!typesRelated(mm, src->type, et->source))
                fail(ectx, "source var type '" + src->type + "' unrelated to '" + et->source + "'");
            if (!typesRelated(mm, dst->type, et->target))
                fail(ectx, "target var type '" + dst->type + "' unrelated to '" + et->target + "'");
            if (pe.marking == Marking::Context &&
                (src->marking == Marking::Created || dst->marking == Marking::Created))
                fail(ectx, "context edge may not touch created nodes");
        }
    }
}

void validateCorrLinks(const TggRule& rule, const Ctx& ctx) {
    for (const PatternElement& pe : rule.elements) {
        if (pe.domain != Domain::Corr || pe.kind != PatternKind::Node) continue;
        bool source = false, target = false;
        for (const PatternElement& l : rule.elements) {
            if (l.domain != Domain::Corr || l.kind != PatternKind::Edge || l.src != pe.var)
                continue;
            Domain far = rule.element(l.dst).domain;
            source |= far == Domain::Source;
            target |= far == Domain::Target;
        }
        if (!source || !target)
            fail(ctx, "corr node '" + pe.var + "' must link source and target elements");
    }
}

void validateConnectivity(const TggRule& rule, const Ctx& ctx) {
    if (rule.axiom) return;
    // var adjacency through pattern edges (model edges and corr links)
    std::map<std::string, std::set<std::string>> adj;
    for (const PatternElement& pe : rule.elements) {
        if (pe.kind != PatternKind::Edge) continue;
        adj[pe.var].insert(pe.src);
        adj[pe.var].insert(pe.dst);
        adj[pe.src].insert(pe.var);
        adj[pe.dst].insert(pe.var);
    }
    for (const PatternElement& pe : rule.elements) {
        if (pe.domain != Domain::Source || pe.marking != Marking::Created) continue;
        std::set<std::string> seen{pe.var};
        std::vector<std::string> stack{pe.var};
        bool found = false;
        while (!stack.empty() && !found) {
            std::string cur = stack.back();
            stack.pop_back();
            if (rule.element(cur).marking == Marking::Context) {
                found = true;
                break;
            }
            for (const auto& nb : adj[cur]) {
                if (seen.insert(nb).second) stack.push_back(nb);
            }
        }
        if (!found)
            fail(ctx, "disconnected created source element '" + pe.var + "'");
    }
}

void validateCreatedTargetLinks(const TggRule& rule, const Ctx& ctx) {
    for (const PatternElement& pe : rule.elements) {
        if (pe.domain != Domain::Target || pe.marking != Marking::Created ||
            pe.kind != PatternKind::Node)
            continue;
        bool linked = false;
        for (const PatternElement& l : rule.elements) {
            if (l.domain != Domain::Corr || l.kind != PatternKind::Edge) continue;
            if (l.dst != pe.var) continue;
            const PatternElement& corrNode = rule.element(l.src);
            if (corrNode.marking != Marking::Created) continue;
            // that corr node must also link a created source element
            for (const PatternElement& l2 : rule.elements) {
                if (l2.domain != Domain::Corr || l2.kind != PatternKind::Edge ||
                    l2.src != corrNode.var)
                    continue;
                const PatternElement& far = rule.element(l2.dst);
                if (far.domain == Domain::Source && far.marking == Marking::Created) {
                    linked = true;
                    break;
                }
            }
            if (linked) break;
        }
        if (!linked) fail(ctx, "unlinked created target '" + pe.var + "'");
    }
}

struct SlotRef {
    const PatternElement* var;
    const AttributeDef* def;
};

SlotRef resolveAttrRef(const RuleSet& rs, const TggRule& rule, const std::string& var,
                       const std::string& attr, const Ctx& ctx) {
    const PatternElement* pe = rule.find(var);
    if (!pe) fail(ctx, "unknown var '" + var + "'");
    if (pe->kind != PatternKind::Node || pe->domain == Domain::Corr)
        fail(ctx, "attribute ref '" + var + "." + attr + "' must name a source/target node");
    const auto& flat = metaFor(rs, pe->domain).flatAttributes(pe->type);
    auto it = flat.find(attr);
    if (it == flat.end())
        fail(ctx, "type '" + pe->type + "' has no attribute '" + attr + "'");
    return {pe, &it->second};
}

void coerceReal(AttrValue& v, ValueKind expected) {
    if (expected == ValueKind::Real) {
        if (const auto* i = std::get_if<std::int64_t>(&v)) v = double(*i);
    }
}

void validateConstraints(const RuleSet& rs, TggRule& rule, const Ctx& ctx) {
    for (AttributeConstraint& c : rule.constraints) {
        const Ctx cctx = ctx + ", constraint on '" + c.slotVar + "." + c.slotAttr + "'";
        SlotRef slot = resolveAttrRef(rs, rule, c.slotVar, c.slotAttr, cctx);
        bool bidi = c.direction == ConstraintDirection::Bidirectional;
        if (rs.bidirectional() && !bidi)
            fail(cctx, "forward-only constraint in a bidirectional ruleset");
        if (rs.bidirectional() && slot.var->domain == Domain::Source &&
            slot.var->marking == Marking::Created)
            fail(cctx, "slot on a created source element in a bidirectional ruleset");
        std::vector<const PatternElement*> exprVars;
        if (const auto* cp2 = std::get_if<ExprCopy>(&c.expr))
            exprVars.push_back(&rule.element(cp2->var));
        else if (const auto* af2 = std::get_if<ExprAffine>(&c.expr))
            exprVars.push_back(&rule.element(af2->var));
        else if (const auto* rt2 = std::get_if<ExprRatio>(&c.expr)) {
            exprVars.push_back(&rule.element(rt2->numVar));
            exprVars.push_back(&rule.element(rt2->denVar));
        }
        for (const PatternElement* v : exprVars) {
            if (v->domain == Domain::Target && v->marking == Marking::Created)
                fail(cctx, "expr reads a created target attribute");
        }
        if (auto* k = std::get_if<ExprConst>(&c.expr)) {
            coerceReal(k->value, slot.def->kind);
            if (kindOf(k->value) != slot.def->kind)
                fail(cctx, "constant kind does not match the slot");
        } else if (const auto* cp = std::get_if<ExprCopy>(&c.expr)) {
            SlotRef from = resolveAttrRef(rs, rule, cp->var, cp->attr, cctx);
            if (from.def->kind != slot.def->kind)
                fail(cctx, "copy between different value kinds");
        } else if (const auto* af = std::get_if<ExprAffine>(&c.expr)) {
            if (bidi) fail(cctx, "non-invertible bidirectional constraint (affine)");
            SlotRef from = resolveAttrRef(rs, rule, af->var, af->attr, cctx);
            if (slot.def->kind != ValueKind::Real)
                fail(cctx, "affine slot must be real");
            if (from.def->kind != ValueKind::Integer && from.def->kind != ValueKind::Real)
                fail(cctx, "affine input must be numeric");
        } else if (const auto* rt = std::get_if<ExprRatio>(&c.expr)) {
            if (bidi) fail(cctx, "non-invertible bidirectional constraint (ratio)");
            SlotRef num = resolveAttrRef(rs, rule, rt->numVar, rt->numAttr, cctx);
            SlotRef den = resolveAttrRef(rs, rule, rt->denVar, rt->denAttr, cctx);
            if (slot.def->kind != ValueKind::Real)
                fail(cctx, "ratio slot must be real");
            for (const SlotRef* s : {&num, &den}) {
                if (s->def->kind != ValueKind::Integer && s->def->kind != ValueKind::Real)
                    fail(cctx, "ratio input must be numeric");
            }
        }
    }
}

void validateDefaults(const RuleSet& rs, TggRule& rule, const Ctx& ctx) {
    if (!rule.backwardDefaults.empty() && !rs.bidirectional())
        fail(ctx, "backwardDefaults require a bidirectional ruleset");
    std::set<std::pair<std::string, std::string>> seen;
    for (BackwardDefault& d : rule.backwardDefaults) {
        const Ctx dctx = ctx + ", default for '" + d.var + "." + d.attr + "'";
        SlotRef ref = resolveAttrRef(rs, rule, d.var, d.attr, dctx);
        if (ref.var->domain != Domain::Source)
            fail(dctx, "defaults apply to source elements only");
        coerceReal(d.value, ref.def->kind);
        if (kindOf(d.value) != ref.def->kind) fail(dctx, "default kind mismatch");
        if (!seen.emplace(d.var, d.attr).second) fail(dctx, "duplicate default");
    }
    // materializable vars (context source in defaults) must be fully defaulted
    std::set<std::string> defaulted;
    for (const BackwardDefault& d : rule.backwardDefaults) defaulted.insert(d.var);
    for (const std::string& var : defaulted) {
        const PatternElement& pe = rule.element(var);
        if (pe.marking != Marking::Context) continue;
        const auto& flat = rs.sourceMeta->flatAttributes(pe.type);
        for (const auto& [attr, def] : flat) {
            if (!rule.hasDefaultFor(var, attr))
                fail(ctx, "materializable var '" + var + "' lacks a default for '" + attr + "'");
        }
    }
}

void validateTotality(const RuleSet& rs, const TggRule& rule, const Ctx& ctx) {
    // forward: every created target node attribute assigned exactly once
    for (const PatternElement& pe : rule.elements) {
        if (pe.domain != Domain::Target || pe.marking != Marking::Created ||
            pe.kind != PatternKind::Node)
            continue;
        for (const auto& [attr, def] : rs.targetMeta->flatAttributes(pe.type)) {
            int n = 0;
            for (const AttributeConstraint& c : rule.constraints) {
                if (c.slotVar == pe.var && c.slotAttr == attr) ++n;
            }
            if (n == 0)
                fail(ctx, "unassigned created target attribute '" + pe.var + "." + attr + "'");
            if (n > 1)
                fail(ctx, "attribute '" + pe.var + "." + attr + "' assigned more than once");
        }
    }
    if (!rs.bidirectional()) return;
    bool backwardApplicable = false;
    for (const PatternElement& pe : rule.elements)
        if (pe.domain == Domain::Target && pe.marking == Marking::Created) backwardApplicable = true;
    // rules the backward plan can never anchor need no inverse
    if (!backwardApplicable) return;
    // backward: every created source node attribute determined exactly once
    for (const PatternElement& pe : rule.elements) {
        if (pe.domain != Domain::Source || pe.marking != Marking::Created ||
            pe.kind != PatternKind::Node)
            continue;
        for (const auto& [attr, def] : rs.sourceMeta->flatAttributes(pe.type)) {
            int n = rule.hasDefaultFor(pe.var, attr) ? 1 : 0;
            for (const AttributeConstraint& c : rule.constraints) {
                const auto* cp = std::get_if<ExprCopy>(&c.expr);
                if (!cp || cp->var != pe.var || cp->attr != attr) continue;
                // slot side must be bound in the backward direction
                const PatternElement& slot = rule.element(c.slotVar);
                bool slotBound = slot.domain == Domain::Target ||
                                 (slot.domain == Domain::Source &&
                                  slot.marking == Marking::Context &&
                                  !rule.materializable(c.slotVar));
                if (slotBound) ++n;
            }
            if (n == 0)
                fail(ctx, "undetermined created source attribute '" + pe.var + "." + attr +
                              "' in the backward direction");
            if (n > 1)
                fail(ctx, "attribute '" + pe.var + "." + attr +
                              "' determined more than once in the backward direction");
        }
    }
}

} // namespace

void validateRuleSet(RuleSet& rs) {
    const Ctx rctx = "ruleset '" + rs.name + "'";
    if (!rs.sourceMeta || !rs.targetMeta) fail(rctx, "missing metamodels");
    {
        std::set<std::string> seen;
        for (const auto& t : rs.corrTypes) {
            if (t.empty()) fail(rctx, "empty corr type name");
            if (!seen.insert(t).second) fail(rctx, "duplicate corr type '" + t + "'");
        }
    }
    {
        std::set<std::string> seen;
        for (const auto& r : rs.rules) {
            if (r.name.empty()) fail(rctx, "rule with empty name");
            if (!seen.insert(r.name).second) fail(rctx, "duplicate rule '" + r.name + "'");
        }
    }
    std::stable_sort(rs.rules.begin(), rs.rules.end(), [](const TggRule& a, const TggRule& b) {
        return std::tie(a.priority, a.name) < std::tie(b.priority, b.name);
    });

    int axioms = 0;
    for (TggRule& rule : rs.rules) {
        const Ctx ctx = "rule '" + rule.name + "'";
        validateElements(rs, rule, ctx);
        rule.axiom = std::none_of(rule.elements.begin(), rule.elements.end(),
                                  [](const PatternElement& pe) {
                                      return pe.marking == Marking::Context;
                                  });
        if (rule.axiom) ++axioms;
        if (rule.elements.empty()) fail(ctx, "rule without pattern elements");
        bool createsSource = std::any_of(rule.elements.begin(), rule.elements.end(),
                                         [](const PatternElement& pe) {
                                             return pe.domain == Domain::Source &&
                                                    pe.marking == Marking::Created;
                                         });
        if (!createsSource) fail(ctx, "rule creates no source element");
        validateCorrLinks(rule, ctx);
        validateConnectivity(rule, ctx);
        validateCreatedTargetLinks(rule, ctx);
        validateConstraints(rs, rule, ctx);
        validateDefaults(rs, rule, ctx);
        validateTotality(rs, rule, ctx);
    }
    if (axioms > 1) fail(rctx, "more than one axiom rule");

    // plans must compile for every supported direction
    for (const TggRule& rule : rs.rules) {
        try {
            buildSearchPlan(rule, Dir::Forward);
            if (rs.bidirectional()) buildSearchPlan(rule, Dir::Backward);
        } catch (const ValidationError& e) {
            fail("rule '" + rule.name + "'", e.what());
        }
    }
}

} // namespace rtsync::tgg
