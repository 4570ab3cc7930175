#include "rtsync/tgg/io.hpp"

#include <json.hpp>

#include "rtsync/errors.hpp"
#include "rtsync/model/io.hpp"

using nlohmann::json;

namespace rtsync::tgg {

namespace {

json parseJson(const std::string& text, const char* what) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string(what) + ": " + e.what());
    }
}

const json& field(const json& j, const char* name, const std::string& context) {
    auto it = j.find(name);
    if (it == j.end())
        throw ValidationError(context + ": missing field '" + name + "'");
    return *it;
}

std::string stringField(const json& j, const char* name, const std::string& context) {
    const json& v = field(j, name, context);
    if (!v.is_string())
        throw ValidationError(context + ": field '" + name + "' must be a string");
    return v.get<std::string>();
}

AttrValue valueFromJson(const json& v, const std::string& context) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_boolean()) return v.get<bool>();
    if (v.is_number_integer()) return v.get<std::int64_t>();
    if (v.is_number_float()) return v.get<double>();
    throw ValidationError(context + ": unsupported value type");
}

json valueToJson(const AttrValue& v) {
    switch (kindOf(v)) {
    case ValueKind::String: return std::get<std::string>(v);
    case ValueKind::Integer: return std::get<std::int64_t>(v);
    case ValueKind::Real: return std::get<double>(v);
    case ValueKind::Boolean: return std::get<bool>(v);
    }
    return nullptr;
}

std::pair<std::string, std::string> splitRef(const std::string& ref,
                                             const std::string& context) {
    auto dot = ref.find('.');
    if (dot == std::string::npos || dot == 0 || dot + 1 == ref.size())
        throw ValidationError(context + ": '" + ref + "' must have the form var.attr");
    return {ref.substr(0, dot), ref.substr(dot + 1)};
}

AttrExpr exprFromJson(const json& j, const std::string& context) {
    if (!j.is_object() || j.size() != 1)
        throw ValidationError(context + ": expr must be an object with one operator");
    if (auto it = j.find("const"); it != j.end()) return ExprConst{valueFromJson(*it, context)};
    if (auto it = j.find("copy"); it != j.end()) {
        if (!it->is_string()) throw ValidationError(context + ": copy takes a var.attr string");
        auto [var, attr] = splitRef(it->get<std::string>(), context);
        return ExprCopy{var, attr};
    }
    if (auto it = j.find("affine"); it != j.end()) {
        const json& a = *it;
        auto [var, attr] = splitRef(stringField(a, "of", context), context);
        const json& fa = field(a, "a", context);
        const json& fb = field(a, "b", context);
        if (!fa.is_number() || !fb.is_number())
            throw ValidationError(context + ": affine coefficients must be numbers");
        return ExprAffine{var, attr, fa.get<double>(), fb.get<double>()};
    }
    if (auto it = j.find("ratio"); it != j.end()) {
        const json& r = *it;
        auto [nv, na] = splitRef(stringField(r, "num", context), context);
        auto [dv, da] = splitRef(stringField(r, "den", context), context);
        return ExprRatio{nv, na, dv, da};
    }
    throw ValidationError(context + ": unknown expr operator");
}

json exprToJson(const AttrExpr& e) {
    if (const auto* k = std::get_if<ExprConst>(&e)) return json{{"const", valueToJson(k->value)}};
    if (const auto* c = std::get_if<ExprCopy>(&e)) return json{{"copy", c->var + "." + c->attr}};
    if (const auto* a = std::get_if<ExprAffine>(&e))
        return json{{"affine", {{"of", a->var + "." + a->attr}, {"a", a->a}, {"b", a->b}}}};
    const auto& r = std::get<ExprRatio>(e);
    return json{{"ratio",
                 {{"num", r.numVar + "." + r.numAttr}, {"den", r.denVar + "." + r.denAttr}}}};
}

template <typename T, typename F>
std::set<T> idSet(const json& j, const char* name, const std::string& context, F get) {
    std::set<T> out;
    auto it = j.find(name);
    if (it == j.end()) return out;
    if (!it->is_array()) throw ValidationError(context + ": '" + name + "' must be an array");
    for (const json& v : *it) out.insert(get(v));
    return out;
}

std::uint64_t u64(const json& v, const std::string& context) {
    if (!v.is_number_unsigned() && !v.is_number_integer())
        throw ValidationError(context + ": expected an id number");
    if (v.is_number_integer() && v.get<std::int64_t>() < 0)
        throw ValidationError(context + ": ids must be non-negative");
    return v.get<std::uint64_t>();
}

} // namespace

RuleSet loadRuleSet(const std::string& jsonText, std::shared_ptr<const MetaModel> srcMeta,
                    std::shared_ptr<const MetaModel> tgtMeta) {
    if (!srcMeta || !tgtMeta) throw ValidationError("ruleset: metamodels are required");
    json j = parseJson(jsonText, "ruleset");
    if (!j.is_object()) throw ValidationError("ruleset: document must be an object");

    RuleSet rs;
    rs.name = stringField(j, "name", "ruleset");
    const std::string ctx = "ruleset '" + rs.name + "'";
    if (stringField(j, "sourceMetaModel", ctx) != srcMeta->name())
        throw ValidationError(ctx + ": sourceMetaModel is not '" + srcMeta->name() + "'");
    if (stringField(j, "targetMetaModel", ctx) != tgtMeta->name())
        throw ValidationError(ctx + ": targetMetaModel is not '" + tgtMeta->name() + "'");
    std::string dir = stringField(j, "direction", ctx);
    if (dir == "bidirectional") rs.direction = Directionality::Bidirectional;
    else if (dir == "forward-only") rs.direction = Directionality::ForwardOnly;
    else throw ValidationError(ctx + ": direction must be bidirectional or forward-only");
    rs.sourceMeta = std::move(srcMeta);
    rs.targetMeta = std::move(tgtMeta);

    const json& corrTypes = field(j, "corrTypes", ctx);
    if (!corrTypes.is_array()) throw ValidationError(ctx + ": corrTypes must be an array");
    for (const json& t : corrTypes) {
        if (!t.is_string()) throw ValidationError(ctx + ": corr types must be strings");
        rs.corrTypes.push_back(t.get<std::string>());
    }

    const json& rules = field(j, "rules", ctx);
    if (!rules.is_array()) throw ValidationError(ctx + ": rules must be an array");
    for (const json& rj : rules) {
        TggRule rule;
        rule.name = stringField(rj, "name", ctx);
        const std::string rctx = "rule '" + rule.name + "'";
        const json& prio = field(rj, "priority", rctx);
        if (!prio.is_number_integer())
            throw ValidationError(rctx + ": priority must be an integer");
        rule.priority = prio.get<int>();

        const json& elements = field(rj, "elements", rctx);
        if (!elements.is_array()) throw ValidationError(rctx + ": elements must be an array");
        for (const json& ej : elements) {
            PatternElement pe;
            pe.var = stringField(ej, "var", rctx);
            const std::string ectx = rctx + ", var '" + pe.var + "'";
            std::string kind = stringField(ej, "kind", ectx);
            if (kind == "node") pe.kind = PatternKind::Node;
            else if (kind == "edge") pe.kind = PatternKind::Edge;
            else throw ValidationError(ectx + ": kind must be node or edge");
            pe.type = stringField(ej, "type", ectx);
            std::string domain = stringField(ej, "domain", ectx);
            if (domain == "source") pe.domain = Domain::Source;
            else if (domain == "corr") pe.domain = Domain::Corr;
            else if (domain == "target") pe.domain = Domain::Target;
            else throw ValidationError(ectx + ": domain must be source, corr or target");
            std::string marking = stringField(ej, "marking", ectx);
            if (marking == "context") pe.marking = Marking::Context;
            else if (marking == "created") pe.marking = Marking::Created;
            else throw ValidationError(ectx + ": marking must be context or created");
            if (pe.kind == PatternKind::Edge) {
                pe.src = stringField(ej, "src", ectx);
                pe.dst = stringField(ej, "dst", ectx);
            }
            rule.elements.push_back(std::move(pe));
        }

        if (auto it = rj.find("attributes"); it != rj.end()) {
            if (!it->is_array()) throw ValidationError(rctx + ": attributes must be an array");
            for (const json& cj : *it) {
                AttributeConstraint c;
                auto [var, attr] = splitRef(stringField(cj, "slot", rctx), rctx);
                c.slotVar = var;
                c.slotAttr = attr;
                c.expr = exprFromJson(field(cj, "expr", rctx), rctx + " slot " + var);
                std::string cdir = cj.contains("direction")
                                       ? stringField(cj, "direction", rctx)
                                       : "forward-only";
                if (cdir == "bidirectional") c.direction = ConstraintDirection::Bidirectional;
                else if (cdir == "forward-only") c.direction = ConstraintDirection::ForwardOnly;
                else throw ValidationError(rctx + ": constraint direction must be "
                                                  "bidirectional or forward-only");
                rule.constraints.push_back(std::move(c));
            }
        }
        if (auto it = rj.find("backwardDefaults"); it != rj.end()) {
            if (!it->is_array())
                throw ValidationError(rctx + ": backwardDefaults must be an array");
            for (const json& dj : *it) {
                BackwardDefault d;
                d.var = stringField(dj, "var", rctx);
                d.attr = stringField(dj, "attr", rctx);
                d.value = valueFromJson(field(dj, "value", rctx), rctx);
                rule.backwardDefaults.push_back(std::move(d));
            }
        }
        rs.rules.push_back(std::move(rule));
    }

    validateRuleSet(rs);
    return rs;
}

RuleSet loadRuleSetFile(const std::filesystem::path& path,
                        std::shared_ptr<const MetaModel> srcMeta,
                        std::shared_ptr<const MetaModel> tgtMeta) {
    return loadRuleSet(io::readFile(path), std::move(srcMeta), std::move(tgtMeta));
}

std::string saveCorrespondence(const CorrespondenceModel& corr) {
    json doc;
    doc["nextAppId"] = corr.nextAppId();
    doc["nextCorrId"] = corr.nextCorrId();
    json nodes = json::array();
    for (const auto& [id, cn] : corr.corrNodes()) {
        json n;
        n["id"] = id;
        n["type"] = cn.type;
        n["owner"] = cn.owner;
        n["source"] = cn.sourceIds;
        n["target"] = cn.targetIds;
        nodes.push_back(std::move(n));
    }
    doc["corrNodes"] = std::move(nodes);
    json apps = json::array();
    for (const auto& [id, app] : corr.applications()) {
        json a;
        a["id"] = id;
        a["rule"] = app.ruleName;
        a["binding"] = app.binding;
        a["boundSource"] = app.boundSource;
        a["boundTarget"] = app.boundTarget;
        a["createdSource"] = app.createdSource;
        a["createdTarget"] = app.createdTarget;
        a["createdCorr"] = app.createdCorr;
        a["materialized"] = app.materializedVars;
        a["dependsOn"] = app.dependsOn;
        apps.push_back(std::move(a));
    }
    doc["applications"] = std::move(apps);
    return doc.dump(2) + "\n";
}

CorrespondenceModel loadCorrespondence(const std::string& jsonText) {
    json j = parseJson(jsonText, "correspondence");
    if (!j.is_object()) throw ValidationError("correspondence: document must be an object");
    const std::string ctx = "correspondence";
    std::map<ElementId, CorrNode> nodes;
    for (const json& nj : field(j, "corrNodes", ctx)) {
        CorrNode cn;
        cn.id = u64(field(nj, "id", ctx), ctx);
        cn.type = stringField(nj, "type", ctx);
        cn.owner = u64(field(nj, "owner", ctx), ctx);
        cn.sourceIds = idSet<ElementId>(nj, "source", ctx,
                                        [&](const json& v) { return u64(v, ctx); });
        cn.targetIds = idSet<ElementId>(nj, "target", ctx,
                                        [&](const json& v) { return u64(v, ctx); });
        if (!nodes.emplace(cn.id, std::move(cn)).second)
            throw ValidationError(ctx + ": duplicate corr node id");
    }
    std::map<std::uint64_t, RuleApplication> apps;
    for (const json& aj : field(j, "applications", ctx)) {
        RuleApplication app;
        app.id = u64(field(aj, "id", ctx), ctx);
        app.ruleName = stringField(aj, "rule", ctx);
        const json& binding = field(aj, "binding", ctx);
        if (!binding.is_object()) throw ValidationError(ctx + ": binding must be an object");
        for (auto it = binding.begin(); it != binding.end(); ++it)
            app.binding[it.key()] = u64(it.value(), ctx);
        auto ids = [&](const char* name) {
            return idSet<ElementId>(aj, name, ctx, [&](const json& v) { return u64(v, ctx); });
        };
        app.boundSource = ids("boundSource");
        app.boundTarget = ids("boundTarget");
        app.createdSource = ids("createdSource");
        app.createdTarget = ids("createdTarget");
        app.createdCorr = ids("createdCorr");
        app.materializedVars = idSet<std::string>(aj, "materialized", ctx, [&](const json& v) {
            if (!v.is_string()) throw ValidationError(ctx + ": materialized entries are vars");
            return v.get<std::string>();
        });
        app.dependsOn = idSet<std::uint64_t>(aj, "dependsOn", ctx,
                                             [&](const json& v) { return u64(v, ctx); });
        if (!apps.emplace(app.id, std::move(app)).second)
            throw ValidationError(ctx + ": duplicate application id");
    }
    CorrespondenceModel corr;
    corr.restore(std::move(nodes), std::move(apps), u64(field(j, "nextCorrId", ctx), ctx),
                 u64(field(j, "nextAppId", ctx), ctx));
    return corr;
}

std::string syncReportJson(const SyncReport& report) {
    json j;
    j["applicationsAdded"] = report.applicationsAdded;
    j["applicationsRevoked"] = report.applicationsRevoked;
    j["attributesUpdated"] = report.attributesUpdated;
    j["created"] = report.created;
    j["deleted"] = report.deleted;
    j["quiet"] = report.quiet();
    j["touchedElements"] = report.touchedElementCount;
    j["uncovered"] = report.uncovered;
    return j.dump(2) + "\n";
}

std::string consistencyReportJson(const ConsistencyReport& report) {
    json j;
    j["ok"] = report.ok();
    json findings = json::array();
    for (const ConsistencyFinding& f : report.findings) {
        findings.push_back(
            {{"application", f.application}, {"condition", f.condition}, {"detail", f.detail}});
    }
    j["findings"] = std::move(findings);
    return j.dump(2) + "\n";
}

} // namespace rtsync::tgg
