#include "rtsync/tgg/transform.hpp"

#include "rtsync/errors.hpp"
#include "rtsync/tgg/engine.hpp"

namespace rtsync::tgg {

namespace {

TransformResult transformDirected(const Model& input, const RuleSet& rules, Dir dir,
                                  const std::string& outputModelId) {
    const auto& inMeta = dir == Dir::Forward ? rules.sourceMeta : rules.targetMeta;
    const auto& outMeta = dir == Dir::Forward ? rules.targetMeta : rules.sourceMeta;
    if (input.metaModel().name() != inMeta->name())
        throw ValidationError("model '" + input.id() + "' conforms to '" +
                              input.metaModel().name() + "' but ruleset '" + rules.name +
                              "' expects '" + inMeta->name() + "'");

    Model output(outputModelId, outMeta);
    CorrespondenceModel corr;
    TouchSet touch;
    std::set<ElementId> uncovered;
    std::vector<std::uint64_t> apps;
    {
        auto rl = input.readLock();
        for (const auto& [id, n] : input.nodes()) uncovered.insert(id);
        for (const auto& [id, e] : input.edges()) uncovered.insert(id);
        auto w = output.write();
        EngineContext ctx{rules, dir, input, w, corr, uncovered, touch};
        apps = runToFixpoint(ctx, nullptr);
    }
    return TransformResult{std::move(output),
                           std::move(corr),
                           std::move(apps),
                           {uncovered.begin(), uncovered.end()},
                           touch.size()};
}

} // namespace

TransformResult transformForward(const Model& source, const RuleSet& rules,
                                 const std::string& outputModelId) {
    return transformDirected(source, rules, Dir::Forward, outputModelId);
}

TransformResult transformBackward(const Model& target, const RuleSet& rules,
                                  const std::string& outputModelId) {
    if (!rules.bidirectional())
        throw ValidationError("ruleset '" + rules.name + "' does not support backward runs");
    return transformDirected(target, rules, Dir::Backward, outputModelId);
}

} // namespace rtsync::tgg
