#include "rtsync/tgg/search_plan.hpp"

#include <set>

#include "rtsync/errors.hpp"

namespace rtsync::tgg {

namespace {

bool isRelevant(const PatternElement& pe, Dir dir) {
    if (pe.domain == inputDomain(dir)) return true;
    if (pe.domain == Domain::Corr)
        return pe.kind == PatternKind::Node && pe.marking == Marking::Context;
    return pe.marking == Marking::Context; // output-domain context
}

// A context edge on the output side of a backward plan can be conjured up
// when the model lacks it, provided the far endpoint is either already bound
// by an earlier step or can itself be defaulted into existence.
bool edgeMaterializable(const TggRule& rule, const PatternElement& edge,
                        const std::set<std::size_t>& bound) {
    if (edge.domain != Domain::Source || edge.marking != Marking::Context) return false;
    for (const std::string* endVar : {&edge.src, &edge.dst}) {
        if (bound.count(rule.varIndex.at(*endVar))) continue;
        if (!rule.materializable(*endVar)) return false;
    }
    return true;
}

} // namespace

SearchPlan buildSearchPlan(const TggRule& rule, Dir dir) {
    SearchPlan plan;
    plan.dir = dir;

    const Domain in = inputDomain(dir);

    // anchor: first created input-domain node, else first created input-domain edge
    std::size_t anchorIdx = kNoElem;
    for (std::size_t i = 0; i < rule.elements.size(); ++i) {
        const PatternElement& pe = rule.elements[i];
        if (pe.domain != in || pe.marking != Marking::Created) continue;
        if (pe.kind == PatternKind::Node) {
            anchorIdx = i;
            break;
        }
        if (anchorIdx == kNoElem) anchorIdx = i;
    }
    if (anchorIdx == kNoElem) {
        plan.applicable = false;
        return plan;
    }
    plan.applicable = true;

    std::set<std::size_t> pending;
    for (std::size_t i = 0; i < rule.elements.size(); ++i) {
        if (i != anchorIdx && isRelevant(rule.elements[i], dir)) pending.insert(i);
    }

    std::set<std::size_t> bound{anchorIdx};
    plan.steps.push_back({StepKind::Anchor, anchorIdx, kNoElem, false, false, false});

    auto boundVar = [&](const std::string& var) {
        return bound.count(rule.varIndex.at(var)) != 0;
    };

    while (!pending.empty()) {
        MatchStep best{};
        int bestRank = -1; // higher wins; ties fall to document order
        for (std::size_t i : pending) {
            const PatternElement& pe = rule.elements[i];
            MatchStep step{};
            step.elem = i;
            int rank = -1;
            if (pe.kind == PatternKind::Node && pe.domain != Domain::Corr) {
                for (std::size_t j : bound) {
                    const PatternElement& e = rule.elements[j];
                    if (e.kind != PatternKind::Edge || e.domain == Domain::Corr) continue;
                    if (e.src == pe.var || e.dst == pe.var) {
                        step.kind = StepKind::BindEndpoint;
                        step.via = j;
                        step.sourceEnd = e.src == pe.var;
                        rank = 4;
                        break;
                    }
                }
                if (rank < 0) {
                    for (std::size_t j = 0; j < rule.elements.size() && rank < 0; ++j) {
                        const PatternElement& l = rule.elements[j];
                        if (l.domain != Domain::Corr || l.kind != PatternKind::Edge) continue;
                        if (l.dst != pe.var || !boundVar(l.src)) continue;
                        step.kind = StepKind::LinkedFromCorr;
                        step.via = j;
                        step.sourceSide = pe.domain == Domain::Source;
                        rank = 1;
                    }
                    if (rank >= 0 && dir == Dir::Backward && rule.materializable(pe.var))
                        step.materializable = true;
                }
            } else if (pe.kind == PatternKind::Edge && pe.domain != Domain::Corr) {
                if (boundVar(pe.src)) {
                    step.kind = StepKind::ExtendOut;
                    step.via = rule.varIndex.at(pe.src);
                    rank = 3;
                } else if (boundVar(pe.dst)) {
                    step.kind = StepKind::ExtendIn;
                    step.via = rule.varIndex.at(pe.dst);
                    rank = 3;
                }
                if (rank >= 0 && dir == Dir::Backward)
                    step.materializable = edgeMaterializable(rule, pe, bound);
            } else if (pe.kind == PatternKind::Node && pe.domain == Domain::Corr) {
                for (std::size_t j = 0; j < rule.elements.size(); ++j) {
                    const PatternElement& l = rule.elements[j];
                    if (l.domain != Domain::Corr || l.kind != PatternKind::Edge) continue;
                    if (l.src != pe.var || !boundVar(l.dst)) continue;
                    step.kind = StepKind::CorrFromLinked;
                    step.via = j;
                    step.sourceSide = rule.element(l.dst).domain == Domain::Source;
                    rank = 2;
                    break;
                }
            }
            if (rank > bestRank) {
                bestRank = rank;
                best = step;
            }
        }
        if (bestRank < 0)
            throw ValidationError("uncoverable pattern: no step reaches var '" +
                                  rule.elements[*pending.begin()].var + "'");
        bound.insert(best.elem);
        pending.erase(best.elem);
        plan.steps.push_back(best);
    }
    return plan;
}

} // namespace rtsync::tgg
