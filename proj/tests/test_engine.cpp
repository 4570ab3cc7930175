#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <json.hpp>

#include <algorithm>
#include <map>
#include <random>
#include <set>

#include "rtsync/errors.hpp"
#include "rtsync/model/io.hpp"
#include "rtsync/model/isomorphism.hpp"
#include "rtsync/tgg/io.hpp"
#include "rtsync/tgg/match.hpp"
#include "rtsync/tgg/projection.hpp"
#include "rtsync/tgg/search_plan.hpp"
#include "rtsync/tgg/sync.hpp"
#include "rtsync/tgg/transform.hpp"
#include "support/fixtures.hpp"
#include "support/mutations.hpp"

using namespace rtsync;
using namespace rtsync::tgg;
using testsupport::loadMeta;

namespace {

std::shared_ptr<const MetaModel> ejbMeta() {
    static auto m = loadMeta("ejb-source");
    return m;
}
std::shared_ptr<const MetaModel> archMeta() {
    static auto m = loadMeta("arch-view");
    return m;
}
std::shared_ptr<const MetaModel> perfMeta() {
    static auto m = loadMeta("perf-view");
    return m;
}
std::shared_ptr<const MetaModel> failMeta() {
    static auto m = loadMeta("fail-view");
    return m;
}

RuleSet archRules() {
    return loadRuleSetFile(testsupport::ruleSetPath("arch-rules"), ejbMeta(), archMeta());
}
RuleSet perfRules() {
    return loadRuleSetFile(testsupport::ruleSetPath("perf-rules"), ejbMeta(), perfMeta());
}
RuleSet failRules() {
    return loadRuleSetFile(testsupport::ruleSetPath("fail-rules"), ejbMeta(), failMeta());
}

nlohmann::json rulesetDoc(const std::string& name) {
    return nlohmann::json::parse(io::readFile(testsupport::ruleSetPath(name)));
}

ElementId addNode(Model& m, const char* type, AttributeMap attrs = {}) {
    return m.applyChange(CreateNode{type, std::move(attrs)}).element;
}
ElementId addEdge(Model& m, const char* type, ElementId src, ElementId dst) {
    return m.applyChange(CreateEdge{type, src, dst}).element;
}

/// Two session beans in one module; the shop bean calls the inventory bean
/// over a name-matched wire and has logged one exception.
struct DemoIds {
    ElementId c1, m1, b1, b2, i1, i2, er1;
    ElementId cm, mb1, mb2, ri1, pi2, w1, re1;
};

DemoIds seedDemo(Model& m) {
    DemoIds d;
    d.c1 = addNode(m, "Container", {{"name", std::string("main")}});
    d.m1 = addNode(m, "EjbModule", {{"name", std::string("app")}});
    d.cm = addEdge(m, "containsModule", d.c1, d.m1);
    d.b1 = addNode(m, "SessionBean", {{"name", std::string("shop")},
                                      {"kind", std::string("stateless")},
                                      {"callCount", std::int64_t(25)},
                                      {"totalTimeMs", std::int64_t(3000)}});
    d.mb1 = addEdge(m, "containsBean", d.m1, d.b1);
    d.b2 = addNode(m, "SessionBean", {{"name", std::string("inventory")},
                                      {"kind", std::string("stateless")},
                                      {"callCount", std::int64_t(10)},
                                      {"totalTimeMs", std::int64_t(400)}});
    d.mb2 = addEdge(m, "containsBean", d.m1, d.b2);
    d.i1 = addNode(m, "Interface", {{"name", std::string("IInventory")}});
    d.ri1 = addEdge(m, "requiresInterface", d.b1, d.i1);
    d.i2 = addNode(m, "Interface", {{"name", std::string("IInventory")}});
    d.pi2 = addEdge(m, "providesInterface", d.b2, d.i2);
    d.w1 = addEdge(m, "wire", d.i1, d.b2);
    d.er1 = addNode(m, "ExceptionRecord", {{"typeName", std::string("TimeoutException")},
                                           {"atMs", std::int64_t(1200)}});
    d.re1 = addEdge(m, "recordsException", d.b1, d.er1);
    return d;
}

Model demoSource() {
    Model m("ejb", ejbMeta());
    seedDemo(m);
    return m;
}

Model demoArchExpected() {
    Model t("arch-expected", archMeta());
    ElementId am = addNode(t, "ArchitectureModel");
    ElementId shop = addNode(t, "Component", {{"name", std::string("shop")}});
    ElementId inv = addNode(t, "Component", {{"name", std::string("inventory")}});
    addEdge(t, "hasComponent", am, shop);
    addEdge(t, "hasComponent", am, inv);
    ElementId preq = addNode(t, "Port", {{"interfaceName", std::string("IInventory")},
                                         {"direction", std::string("required")}});
    ElementId pprov = addNode(t, "Port", {{"interfaceName", std::string("IInventory")},
                                          {"direction", std::string("provided")}});
    addEdge(t, "hasPort", shop, preq);
    addEdge(t, "hasPort", inv, pprov);
    addEdge(t, "connector", preq, pprov);
    return t;
}

const Node* nodeNamed(const Model& m, const std::string& type, const std::string& name) {
    for (ElementId id : m.nodesOfType(type)) {
        const Node* n = m.findNode(id);
        auto it = n->attributes.find("name");
        if (it != n->attributes.end() && std::get<std::string>(it->second) == name) return n;
    }
    return nullptr;
}

void checkMirrorsFresh(const Model& src, const RuleSet& rules, const Model& tgt) {
    TransformResult fresh = transformForward(src, rules, "fresh");
    auto iso = isomorphic(tgt, fresh.output);
    CHECK(iso.isomorphic);
}

} // namespace

TEST_CASE("rulesets: fixture documents load, validate and order by priority") {
    RuleSet arch = archRules();
    CHECK(arch.bidirectional());
    CHECK(arch.name == "arch-rules");
    std::vector<std::string> names;
    for (const auto& r : arch.rules) names.push_back(r.name);
    CHECK(names == std::vector<std::string>{
                       "container-to-architecture", "module-in-container",
                       "session-bean-to-component", "message-bean-to-component",
                       "provided-interface-to-port", "required-interface-to-port",
                       "wire-to-connector"});
    CHECK(arch.rules[0].axiom);
    CHECK_FALSE(arch.rules[1].axiom);
    CHECK(arch.findRule("wire-to-connector") != nullptr);
    CHECK(arch.findRule("ghost") == nullptr);
    CHECK(arch.findRule("session-bean-to-component")->materializable("m"));
    CHECK_FALSE(arch.findRule("session-bean-to-component")->materializable("b"));
    CHECK_FALSE(arch.findRule("session-bean-to-component")->materializable("c"));

    RuleSet perf = perfRules();
    CHECK_FALSE(perf.bidirectional());
    CHECK(perf.rules.size() == 3);
    RuleSet fail = failRules();
    CHECK(fail.rules.size() == 4);
}

TEST_CASE("rulesets: well-formedness violations are rejected") {
    auto doc = rulesetDoc("arch-rules");
    auto loadDoc = [&](const nlohmann::json& d) {
        return loadRuleSet(d.dump(), ejbMeta(), archMeta());
    };

    SUBCASE("malformed json") {
        CHECK_THROWS_AS(loadRuleSet("{nope", ejbMeta(), archMeta()), ParseError);
    }
    SUBCASE("metamodel names must match the document") {
        CHECK_THROWS_AS(loadRuleSet(doc.dump(), archMeta(), ejbMeta()), ValidationError);
    }
    SUBCASE("duplicate rule name") {
        doc["rules"][1]["name"] = "container-to-architecture";
        CHECK_THROWS_WITH_AS(loadDoc(doc), doctest::Contains("duplicate rule"), ValidationError);
    }
    SUBCASE("at most one axiom") {
        doc["rules"][1]["elements"][0]["marking"] = "created";
        CHECK_THROWS_WITH_AS(loadDoc(doc), doctest::Contains("more than one axiom"),
                             ValidationError);
    }
    SUBCASE("undeclared corr type") {
        doc["rules"][0]["elements"][1]["type"] = "Mystery";
        CHECK_THROWS_WITH_AS(loadDoc(doc), doctest::Contains("undeclared corr type"),
                             ValidationError);
    }
    SUBCASE("corr edges must be links") {
        doc["rules"][0]["elements"][2]["type"] = "leash";
        CHECK_THROWS_WITH_AS(loadDoc(doc), doctest::Contains("type 'link'"), ValidationError);
    }
    SUBCASE("link marking must match its corr node") {
        doc["rules"][2]["elements"][10]["marking"] = "context"; // kbb under created kb
        CHECK_THROWS_WITH_AS(loadDoc(doc), doctest::Contains("marking"), ValidationError);
    }
    SUBCASE("context edge on a created node") {
        doc["rules"][2]["elements"][8]["marking"] = "context"; // mb keeps created dst b
        CHECK_THROWS_WITH_AS(loadDoc(doc), doctest::Contains("context edge"), ValidationError);
    }
    SUBCASE("abstract created node in a bidirectional ruleset") {
        doc["rules"][2]["elements"][7]["type"] = "Bean";
        CHECK_THROWS_WITH_AS(loadDoc(doc), doctest::Contains("abstract"), ValidationError);
    }
    SUBCASE("unknown node type") {
        doc["rules"][2]["elements"][7]["type"] = "Ghost";
        CHECK_THROWS_WITH_AS(loadDoc(doc), doctest::Contains("unknown node type"),
                             ValidationError);
    }
    SUBCASE("edge endpoint type mismatch") {
        doc["rules"][2]["elements"][8]["src"] = "c"; // containsBean out of a Container
        CHECK_THROWS_WITH_AS(loadDoc(doc), doctest::Contains("unrelated"), ValidationError);
    }
    SUBCASE("corr node without a target link") {
        doc["rules"][6]["elements"].erase(15); // kwc
        CHECK_THROWS_WITH_AS(loadDoc(doc), doctest::Contains("must link source and target"),
                             ValidationError);
    }
    SUBCASE("created target node without a corr link") {
        doc["rules"][2]["elements"].erase(12); // kbc
        CHECK_THROWS_WITH_AS(loadDoc(doc), doctest::Contains("unlinked created target"),
                             ValidationError);
    }
    SUBCASE("rules must create source elements") {
        doc["rules"][1]["elements"][1]["marking"] = "context";
        doc["rules"][1]["elements"][2]["marking"] = "context";
        CHECK_THROWS_WITH_AS(loadDoc(doc), doctest::Contains("creates no source element"),
                             ValidationError);
    }
    SUBCASE("disconnected created source element") {
        doc["rules"][1]["elements"].erase(2); // module without its containment edge
        CHECK_THROWS_WITH_AS(loadDoc(doc), doctest::Contains("disconnected"), ValidationError);
    }
    SUBCASE("uncoverable pattern") {
        auto& els = doc["rules"][6]["elements"]; // strip the corr node reaching pr
        els.erase(6);
        els.erase(5);
        els.erase(4);
        CHECK_THROWS_WITH_AS(loadDoc(doc), doctest::Contains("uncoverable pattern"),
                             ValidationError);
    }
    SUBCASE("forward-only constraint in a bidirectional ruleset") {
        doc["rules"][2]["attributes"][0]["direction"] = "forward-only";
        CHECK_THROWS_WITH_AS(loadDoc(doc), doctest::Contains("forward-only constraint"),
                             ValidationError);
    }
    SUBCASE("unassigned created target attribute") {
        doc["rules"][2]["attributes"] = nlohmann::json::array();
        CHECK_THROWS_WITH_AS(loadDoc(doc), doctest::Contains("unassigned"), ValidationError);
    }
    SUBCASE("doubly assigned attribute") {
        doc["rules"][2]["attributes"].push_back(doc["rules"][2]["attributes"][0]);
        CHECK_THROWS_WITH_AS(loadDoc(doc), doctest::Contains("more than once"), ValidationError);
    }
    SUBCASE("undetermined created source attribute") {
        doc["rules"][2]["backwardDefaults"].erase(0); // b.kind
        CHECK_THROWS_WITH_AS(loadDoc(doc), doctest::Contains("undetermined"), ValidationError);
    }
    SUBCASE("slot on a created source element") {
        doc["rules"][2]["attributes"].push_back(nlohmann::json::parse(
            R"({"slot":"b.name","expr":{"const":"x"},"direction":"bidirectional"})"));
        CHECK_THROWS_WITH_AS(loadDoc(doc), doctest::Contains("created source"), ValidationError);
    }
    SUBCASE("expr reading a created target attribute") {
        doc["rules"][2]["attributes"].push_back(nlohmann::json::parse(
            R"({"slot":"m.name","expr":{"copy":"comp.name"},"direction":"bidirectional"})"));
        CHECK_THROWS_WITH_AS(loadDoc(doc), doctest::Contains("created target"), ValidationError);
    }
    SUBCASE("copy kind mismatch") {
        doc["rules"][2]["attributes"][0]["expr"] = nlohmann::json::parse(R"({"copy":"b.callCount"})");
        CHECK_THROWS_WITH_AS(loadDoc(doc), doctest::Contains("different value kinds"),
                             ValidationError);
    }
    SUBCASE("const kind mismatch") {
        doc["rules"][4]["attributes"][1]["expr"] = nlohmann::json::parse(R"({"const":7})");
        CHECK_THROWS_WITH_AS(loadDoc(doc), doctest::Contains("constant kind"), ValidationError);
    }
    SUBCASE("ratio must stay forward-only") {
        auto pd = rulesetDoc("perf-rules");
        pd["rules"][2]["attributes"][2]["direction"] = "bidirectional";
        CHECK_THROWS_WITH_AS(loadRuleSet(pd.dump(), ejbMeta(), perfMeta()),
                             doctest::Contains("non-invertible"), ValidationError);
    }
    SUBCASE("affine input must be numeric") {
        auto pd = rulesetDoc("perf-rules");
        pd["rules"][2]["attributes"][2]["expr"] =
            nlohmann::json::parse(R"({"affine":{"of":"b.name","a":2.0,"b":1.0}})");
        CHECK_THROWS_WITH_AS(loadRuleSet(pd.dump(), ejbMeta(), perfMeta()),
                             doctest::Contains("numeric"), ValidationError);
    }
    SUBCASE("affine slot must be real") {
        auto pd = rulesetDoc("perf-rules");
        pd["rules"][2]["attributes"][1]["expr"] =
            nlohmann::json::parse(R"({"affine":{"of":"b.callCount","a":2.0,"b":1.0}})");
        CHECK_THROWS_WITH_AS(loadRuleSet(pd.dump(), ejbMeta(), perfMeta()),
                             doctest::Contains("real"), ValidationError);
    }
    SUBCASE("defaults need a bidirectional ruleset") {
        auto pd = rulesetDoc("perf-rules");
        pd["rules"][1]["backwardDefaults"] =
            nlohmann::json::parse(R"([{"var":"m","attr":"name","value":"x"}])");
        CHECK_THROWS_WITH_AS(loadRuleSet(pd.dump(), ejbMeta(), perfMeta()),
                             doctest::Contains("bidirectional"), ValidationError);
    }
    SUBCASE("defaults are source-side") {
        doc["rules"][2]["backwardDefaults"].push_back(
            nlohmann::json::parse(R"({"var":"comp","attr":"name","value":"x"})"));
        CHECK_THROWS_WITH_AS(loadDoc(doc), doctest::Contains("source elements only"),
                             ValidationError);
    }
    SUBCASE("duplicate default") {
        doc["rules"][2]["backwardDefaults"].push_back(doc["rules"][2]["backwardDefaults"][3]);
        CHECK_THROWS_WITH_AS(loadDoc(doc), doctest::Contains("duplicate default"),
                             ValidationError);
    }
    SUBCASE("default kind mismatch") {
        doc["rules"][2]["backwardDefaults"][1]["value"] = "zero";
        CHECK_THROWS_WITH_AS(loadDoc(doc), doctest::Contains("kind"), ValidationError);
    }
    SUBCASE("partially defaulted context var") {
        doc["rules"][6]["backwardDefaults"] =
            nlohmann::json::parse(R"([{"var":"pb","attr":"name","value":"p"}])");
        CHECK_THROWS_WITH_AS(loadDoc(doc), doctest::Contains("lacks a default"), ValidationError);
    }
}

TEST_CASE("rulesets: integer constants coerce onto real slots") {
    auto pd = rulesetDoc("perf-rules");
    pd["rules"][2]["attributes"][2]["expr"] = nlohmann::json::parse(R"({"const":5})");
    RuleSet rs = loadRuleSet(pd.dump(), ejbMeta(), perfMeta());
    Model src = demoSource();
    TransformResult res = transformForward(src, rs);
    REQUIRE(res.output.nodesOfType("PerfComponent").size() == 2);
    for (ElementId id : res.output.nodesOfType("PerfComponent"))
        CHECK(std::get<double>(res.output.findNode(id)->attributes.at("avgResponseTimeMs")) == 5.0);
}

TEST_CASE("plans: step orders follow the greedy recipe") {
    RuleSet arch = archRules();
    auto vars = [&](const char* rule, Dir dir) {
        const TggRule* r = arch.findRule(rule);
        REQUIRE(r != nullptr);
        SearchPlan p = buildSearchPlan(*r, dir);
        REQUIRE(p.applicable);
        std::vector<std::string> v;
        for (const auto& s : p.steps) v.push_back(r->elements[s.elem].var);
        return v;
    };
    CHECK(vars("container-to-architecture", Dir::Forward) == std::vector<std::string>{"c"});
    CHECK(vars("container-to-architecture", Dir::Backward) == std::vector<std::string>{"am"});
    CHECK(vars("module-in-container", Dir::Forward) == std::vector<std::string>{"m", "cm", "c"});
    CHECK(vars("session-bean-to-component", Dir::Forward) ==
          std::vector<std::string>{"b", "mb", "m", "cm", "c", "k", "am"});
    CHECK(vars("session-bean-to-component", Dir::Backward) ==
          std::vector<std::string>{"comp", "ac", "am", "k", "c", "cm", "m"});
    CHECK(vars("provided-interface-to-port", Dir::Forward) ==
          std::vector<std::string>{"i", "pi", "b", "kb", "comp"});
    CHECK(vars("provided-interface-to-port", Dir::Backward) ==
          std::vector<std::string>{"p", "cp", "comp", "kb", "b"});
    CHECK(vars("wire-to-connector", Dir::Forward) ==
          std::vector<std::string>{"w", "ir", "pb", "ppi", "ip", "kr", "kp", "pr", "pp"});
    CHECK(vars("wire-to-connector", Dir::Backward) ==
          std::vector<std::string>{"cn", "pr", "pp", "kr", "kp", "ir", "ip", "ppi", "pb"});

    // nothing on the target side to anchor a module
    SearchPlan moduleBwd = buildSearchPlan(*arch.findRule("module-in-container"), Dir::Backward);
    CHECK_FALSE(moduleBwd.applicable);

    // backward bean matching may invent the module over its containment edge
    SearchPlan beanBwd = buildSearchPlan(*arch.findRule("session-bean-to-component"), Dir::Backward);
    REQUIRE(beanBwd.steps.size() == 7);
    CHECK(beanBwd.steps[0].kind == StepKind::Anchor);
    CHECK(beanBwd.steps[4].kind == StepKind::LinkedFromCorr);
    CHECK_FALSE(beanBwd.steps[4].materializable); // the container has no defaults
    CHECK(beanBwd.steps[5].kind == StepKind::ExtendOut);
    CHECK(beanBwd.steps[5].materializable);
    CHECK(beanBwd.steps[6].kind == StepKind::BindEndpoint);
}

TEST_CASE("matching: parallel wires enumerate deterministically") {
    RuleSet arch = archRules();
    Model src("ejb", ejbMeta());
    ElementId c = addNode(src, "Container", {{"name", std::string("main")}});
    ElementId m = addNode(src, "EjbModule", {{"name", std::string("app")}});
    addEdge(src, "containsModule", c, m);
    auto bean = [&](const char* name) {
        ElementId b = addNode(src, "SessionBean", {{"name", std::string(name)},
                                                   {"kind", std::string("stateless")},
                                                   {"callCount", std::int64_t(0)},
                                                   {"totalTimeMs", std::int64_t(0)}});
        addEdge(src, "containsBean", m, b);
        return b;
    };
    ElementId bA = bean("a"), bB = bean("b"), bC = bean("c");
    ElementId iA = addNode(src, "Interface", {{"name", std::string("IFoo")}});
    addEdge(src, "requiresInterface", bA, iA);
    ElementId iB = addNode(src, "Interface", {{"name", std::string("IFoo")}});
    addEdge(src, "providesInterface", bB, iB);
    ElementId iC = addNode(src, "Interface", {{"name", std::string("IFoo")}});
    addEdge(src, "providesInterface", bC, iC);

    TransformResult base = transformForward(src, arch);
    ElementId w1 = addEdge(src, "wire", iA, bB);
    ElementId w2 = addEdge(src, "wire", iA, bC);

    const TggRule* wire = arch.findRule("wire-to-connector");
    SearchPlan plan = buildSearchPlan(*wire, Dir::Forward);
    auto bindings = matchRule(*wire, plan, Dir::Forward, src, base.output, base.corr, std::nullopt);
    REQUIRE(bindings.size() == 2);
    CHECK(bindings[0].vars.at("w") == w1);
    CHECK(bindings[1].vars.at("w") == w2);
    CHECK(bindings[0].vars.at("ir") == iA);
    CHECK(bindings[0].vars.at("pb") == bB);
    CHECK(bindings[0].vars.at("ip") == iB);
    CHECK(bindings[1].vars.at("pb") == bC);
    CHECK(bindings[1].vars.at("ip") == iC);
    for (const auto& b : bindings) CHECK(b.vars.at("ir") != b.vars.at("ip"));

    CHECK(matchRule(*wire, plan, Dir::Forward, src, base.output, base.corr, std::nullopt, nullptr, 1)
              .size() == 1);
    auto anchored = matchRule(*wire, plan, Dir::Forward, src, base.output, base.corr, w2);
    REQUIRE(anchored.size() == 1);
    CHECK(anchored[0].vars.at("w") == w2);

    // a name mismatch filters one candidate out
    src.applyChange(SetAttribute{iC, "name", std::string("IOther")});
    CHECK(matchRule(*wire, plan, Dir::Forward, src, base.output, base.corr, std::nullopt).size() == 1);
}

TEST_CASE("matching: inapplicable and mismatched plans refuse") {
    RuleSet arch = archRules();
    const TggRule* module = arch.findRule("module-in-container");
    Model src("ejb", ejbMeta());
    Model tgt("arch", archMeta());
    CorrespondenceModel corr;
    SearchPlan bwd = buildSearchPlan(*module, Dir::Backward);
    CHECK_THROWS_AS(matchRule(*module, bwd, Dir::Backward, tgt, src, corr, std::nullopt),
                    ValidationError);
    SearchPlan fwd = buildSearchPlan(*module, Dir::Forward);
    CHECK_THROWS_AS(matchRule(*module, fwd, Dir::Backward, tgt, src, corr, std::nullopt),
                    ValidationError);
}

TEST_CASE("transform: demo source yields the hand-built architecture") {
    Model src("ejb", ejbMeta());
    DemoIds d = seedDemo(src);
    RuleSet arch = archRules();
    TransformResult res = transformForward(src, arch);

    CHECK(res.applications.size() == 7);
    CHECK(res.uncovered == std::vector<ElementId>{d.er1, d.re1});
    CHECK(res.corr.corrNodes().size() == 6);
    CHECK(res.corr.applications().size() == 7);
    CHECK(res.output.id() == "target");
    CHECK(res.touchedElementCount > 0);

    Model expected = demoArchExpected();
    auto iso = isomorphic(res.output, expected);
    REQUIRE(iso.isomorphic);
    CHECK(verifyWitness(res.output, expected, *iso.witness));

    // coverage: all non-exception source elements are owned exactly once
    CHECK(res.corr.sourceCovered(d.b1));
    CHECK(res.corr.sourceCovered(d.w1));
    CHECK_FALSE(res.corr.sourceCovered(d.er1));
}

TEST_CASE("transform: abstraction views compute their metrics") {
    Model src = demoSource();

    TransformResult pr = transformForward(src, perfRules());
    REQUIRE(pr.output.nodesOfType("PerfComponent").size() == 2);
    const Node* shop = nodeNamed(pr.output, "PerfComponent", "shop");
    const Node* inv = nodeNamed(pr.output, "PerfComponent", "inventory");
    REQUIRE(shop != nullptr);
    REQUIRE(inv != nullptr);
    CHECK(std::get<std::int64_t>(shop->attributes.at("invocationCount")) == 25);
    CHECK(std::get<double>(shop->attributes.at("avgResponseTimeMs")) == 120.0);
    CHECK(std::get<std::int64_t>(inv->attributes.at("invocationCount")) == 10);
    CHECK(std::get<double>(inv->attributes.at("avgResponseTimeMs")) == 40.0);
    CHECK(pr.uncovered.size() == 7); // interfaces, wires and exceptions stay outside

    TransformResult fr = transformForward(src, failRules());
    Model expected("fail-expected", failMeta());
    ElementId fm = addNode(expected, "FailureModel");
    ElementId fuShop = addNode(expected, "FaultyUnit", {{"name", std::string("shop")}});
    ElementId fuInv = addNode(expected, "FaultyUnit", {{"name", std::string("inventory")}});
    addEdge(expected, "hasUnit", fm, fuShop);
    addEdge(expected, "hasUnit", fm, fuInv);
    ElementId fe = addNode(expected, "FailureEvent", {{"typeName", std::string("TimeoutException")},
                                                      {"atMs", std::int64_t(1200)}});
    addEdge(expected, "hasEvent", fuShop, fe);
    CHECK(isomorphic(fr.output, expected).isomorphic);
    CHECK(fr.uncovered.size() == 5);
}

TEST_CASE("transform: ratio clamps a zero denominator") {
    Model src("ejb", ejbMeta());
    ElementId c = addNode(src, "Container", {{"name", std::string("main")}});
    ElementId m = addNode(src, "EjbModule", {{"name", std::string("app")}});
    addEdge(src, "containsModule", c, m);
    ElementId idle = addNode(src, "SessionBean", {{"name", std::string("idle")},
                                                  {"kind", std::string("stateless")},
                                                  {"callCount", std::int64_t(0)},
                                                  {"totalTimeMs", std::int64_t(0)}});
    addEdge(src, "containsBean", m, idle);
    ElementId warm = addNode(src, "MessageDrivenBean", {{"name", std::string("warm")},
                                                        {"kind", std::string("message-driven")},
                                                        {"callCount", std::int64_t(0)},
                                                        {"totalTimeMs", std::int64_t(7)}});
    addEdge(src, "containsBean", m, warm);

    TransformResult res = transformForward(src, perfRules());
    const Node* a = nodeNamed(res.output, "PerfComponent", "idle");
    const Node* b = nodeNamed(res.output, "PerfComponent", "warm");
    REQUIRE(a != nullptr);
    REQUIRE(b != nullptr);
    CHECK(std::get<double>(a->attributes.at("avgResponseTimeMs")) == 0.0);
    CHECK(std::get<double>(b->attributes.at("avgResponseTimeMs")) == 7.0);
}

TEST_CASE("transform: input metamodel must match the ruleset") {
    RuleSet arch = archRules();
    Model wrongFwd("w", archMeta());
    CHECK_THROWS_AS(transformForward(wrongFwd, arch), ValidationError);
    Model wrongBwd("w", ejbMeta());
    CHECK_THROWS_AS(transformBackward(wrongBwd, arch), ValidationError);
    Model perfTgt("p", perfMeta());
    CHECK_THROWS_AS(transformBackward(perfTgt, perfRules()), ValidationError);
}

TEST_CASE("backward: defaults and module materialization") {
    RuleSet arch = archRules();
    Model tgt("arch", archMeta());
    ElementId am = addNode(tgt, "ArchitectureModel");
    ElementId ca = addNode(tgt, "Component", {{"name", std::string("alpha")}});
    addEdge(tgt, "hasComponent", am, ca);
    ElementId p = addNode(tgt, "Port", {{"interfaceName", std::string("ISvc")},
                                        {"direction", std::string("provided")}});
    addEdge(tgt, "hasPort", ca, p);

    TransformResult res = transformBackward(tgt, arch);
    CHECK(res.uncovered.empty());
    CHECK(res.output.id() == "source");

    Model expected("expected", ejbMeta());
    ElementId c = addNode(expected, "Container", {{"name", std::string("container")}});
    ElementId m = addNode(expected, "EjbModule", {{"name", std::string("module")}});
    addEdge(expected, "containsModule", c, m);
    ElementId b = addNode(expected, "SessionBean", {{"name", std::string("alpha")},
                                                    {"kind", std::string("session")},
                                                    {"callCount", std::int64_t(0)},
                                                    {"totalTimeMs", std::int64_t(0)}});
    addEdge(expected, "containsBean", m, b);
    ElementId i = addNode(expected, "Interface", {{"name", std::string("ISvc")}});
    addEdge(expected, "providesInterface", b, i);
    CHECK(isomorphic(res.output, expected).isomorphic);

    const RuleApplication* beanApp = nullptr;
    for (const auto& [id, app] : res.corr.applications())
        if (app.ruleName == "session-bean-to-component") beanApp = &app;
    REQUIRE(beanApp != nullptr);
    CHECK(beanApp->materializedVars == std::set<std::string>{"cm", "m"});

    // a second component reuses the invented module instead of minting one
    ElementId cb = addNode(tgt, "Component", {{"name", std::string("beta")}});
    addEdge(tgt, "hasComponent", am, cb);
    TransformResult res2 = transformBackward(tgt, arch);
    CHECK(res2.output.nodesOfType("EjbModule").size() == 1);
    CHECK(res2.output.nodesOfType("SessionBean").size() == 2);
}

TEST_CASE("backward: connectors reconstruct wires and round-trip") {
    RuleSet arch = archRules();
    Model tgt("arch", archMeta());
    ElementId am = addNode(tgt, "ArchitectureModel");
    ElementId ca = addNode(tgt, "Component", {{"name", std::string("a")}});
    ElementId cb = addNode(tgt, "Component", {{"name", std::string("b")}});
    addEdge(tgt, "hasComponent", am, ca);
    addEdge(tgt, "hasComponent", am, cb);
    ElementId pra = addNode(tgt, "Port", {{"interfaceName", std::string("IX")},
                                          {"direction", std::string("required")}});
    addEdge(tgt, "hasPort", ca, pra);
    ElementId ppb = addNode(tgt, "Port", {{"interfaceName", std::string("IX")},
                                          {"direction", std::string("provided")}});
    addEdge(tgt, "hasPort", cb, ppb);
    addEdge(tgt, "connector", pra, ppb);

    TransformResult back = transformBackward(tgt, arch);
    const Model& src = back.output;
    CHECK(back.uncovered.empty());
    REQUIRE(src.edgesOfType("wire").size() == 1);
    const Edge* w = src.findEdge(*src.edgesOfType("wire").begin());
    const Node* wSrc = src.findNode(w->source);
    const Node* wDst = src.findNode(w->target);
    REQUIRE(wSrc != nullptr);
    REQUIRE(wDst != nullptr);
    CHECK(wSrc->type == "Interface");
    CHECK(std::get<std::string>(wSrc->attributes.at("name")) == "IX");
    CHECK(std::get<std::string>(wDst->attributes.at("name")) == "b");
    REQUIRE(src.inEdges(w->source, "requiresInterface").size() == 1);
    const Edge* req = src.findEdge(*src.inEdges(w->source, "requiresInterface").begin());
    CHECK(std::get<std::string>(src.findNode(req->source)->attributes.at("name")) == "a");

    // forward over the reconstructed source rebuilds the original architecture
    TransformResult fwd = transformForward(src, arch);
    CHECK(isomorphic(fwd.output, tgt).isomorphic);
    CHECK(fwd.uncovered.empty());
}

TEST_CASE("projection: mapped subgraphs agree across a round trip") {
    Model src = demoSource();
    RuleSet arch = archRules();
    TransformResult fwd = transformForward(src, arch);

    Model mapped = projectMapped(src, fwd.corr, arch, Domain::Source);
    CHECK(mapped.id() == "ejb.mapped");

    // modules, counters and exception records fall outside the mapped world
    Model expected("x", ejbMeta());
    expected.insertNodeRaw({1, "Container", {}});
    expected.insertNodeRaw({2, "SessionBean", {{"name", std::string("shop")}}});
    expected.insertNodeRaw({3, "SessionBean", {{"name", std::string("inventory")}}});
    expected.insertNodeRaw({4, "Interface", {{"name", std::string("IInventory")}}});
    expected.insertNodeRaw({5, "Interface", {{"name", std::string("IInventory")}}});
    expected.insertEdgeRaw({6, "requiresInterface", 2, 4});
    expected.insertEdgeRaw({7, "providesInterface", 3, 5});
    expected.insertEdgeRaw({8, "wire", 4, 3});
    CHECK(isomorphic(mapped, expected).isomorphic);

    TransformResult back = transformBackward(fwd.output, arch);
    Model mapped2 = projectMapped(back.output, back.corr, arch, Domain::Source);
    CHECK(isomorphic(mapped, mapped2).isomorphic);

    // the target side maps onto itself completely here
    Model mappedTgt = projectMapped(fwd.output, fwd.corr, arch, Domain::Target);
    CHECK(mappedTgt.nodes().size() == 5);
    CHECK(mappedTgt.edges().size() == 5);

    CHECK_THROWS_AS(projectMapped(src, fwd.corr, arch, Domain::Corr), ValidationError);
    CHECK_THROWS_AS(projectMapped(fwd.output, fwd.corr, arch, Domain::Source), ValidationError);
}

TEST_CASE("sync: initial forward pass equals the batch transform") {
    Model src("ejb", ejbMeta());
    DemoIds d = seedDemo(src);
    Model tgt("arch", archMeta());
    RuleSet arch = archRules();
    SyncSession sess(src, tgt, arch);

    SyncReport rep = sess.syncForward(src.snapshotJournal(0));
    CHECK(rep.applicationsAdded.size() == 7);
    CHECK(rep.applicationsRevoked.empty());
    CHECK(rep.created == 10);
    CHECK(rep.deleted == 0);
    CHECK(rep.attributesUpdated == 0);
    CHECK(rep.uncovered == std::vector<ElementId>{d.er1, d.re1});
    CHECK_FALSE(rep.quiet());
    CHECK(sess.sourceCursor() == src.journalSize());
    checkMirrorsFresh(src, arch, tgt);
    CHECK(sess.checkConsistency().ok());

    CHECK(sess.syncForward(src.snapshotJournal(sess.sourceCursor())).quiet());
}

TEST_CASE("sync: raw-loaded sources translate on the first empty batch") {
    Model orig = demoSource();
    Model src = io::loadModel(io::saveModel(orig), ejbMeta());
    CHECK(src.journalSize() == 0);
    Model tgt("arch", archMeta());
    RuleSet arch = archRules();
    SyncSession sess(src, tgt, arch);
    SyncReport rep = sess.syncForward(src.snapshotJournal(0));
    CHECK(rep.applicationsAdded.size() == 7);
    checkMirrorsFresh(src, arch, tgt);
    // a second empty batch must not re-translate
    CHECK(sess.syncForward(src.snapshotJournal(sess.sourceCursor())).quiet());
}

TEST_CASE("sync: incremental additions stay equivalent and local") {
    Model src("ejb", ejbMeta());
    DemoIds d = seedDemo(src);
    Model tgt("arch", archMeta());
    RuleSet arch = archRules();
    SyncSession sess(src, tgt, arch);
    sess.syncForward(src.snapshotJournal(0));

    ElementId b3 = addNode(src, "SessionBean", {{"name", std::string("billing")},
                                                {"kind", std::string("stateless")},
                                                {"callCount", std::int64_t(0)},
                                                {"totalTimeMs", std::int64_t(0)}});
    addEdge(src, "containsBean", d.m1, b3);
    SyncReport rep = sess.syncForward(src.snapshotJournal(sess.sourceCursor()));
    CHECK(rep.applicationsAdded.size() == 1);
    CHECK(rep.created == 2);
    CHECK(rep.touchedElementCount < 30);
    checkMirrorsFresh(src, arch, tgt);
    CHECK(nodeNamed(tgt, "Component", "billing") != nullptr);

    // a chained interface + wire lands as port + connector in one batch
    ElementId i3 = addNode(src, "Interface", {{"name", std::string("IBilling")}});
    addEdge(src, "providesInterface", b3, i3);
    ElementId i4 = addNode(src, "Interface", {{"name", std::string("IBilling")}});
    addEdge(src, "requiresInterface", d.b1, i4);
    addEdge(src, "wire", i4, b3);
    SyncReport rep2 = sess.syncForward(src.snapshotJournal(sess.sourceCursor()));
    CHECK(rep2.applicationsAdded.size() == 3);
    checkMirrorsFresh(src, arch, tgt);
    CHECK(sess.checkConsistency().ok());
}

TEST_CASE("sync: source deletions cascade through revocation") {
    Model src("ejb", ejbMeta());
    DemoIds d = seedDemo(src);
    Model tgt("arch", archMeta());
    RuleSet arch = archRules();
    SyncSession sess(src, tgt, arch);
    sess.syncForward(src.snapshotJournal(0));

    SUBCASE("deleting a bean drops its component, port and connector") {
        src.applyChange(DeleteNode{d.b2});
        SyncReport rep = sess.syncForward(src.snapshotJournal(sess.sourceCursor()));
        CHECK(rep.applicationsRevoked.size() == 3);
        CHECK(std::is_sorted(rep.applicationsRevoked.rbegin(), rep.applicationsRevoked.rend()));
        CHECK(rep.deleted == 5);
        CHECK(rep.applicationsAdded.empty());
        CHECK(tgt.nodesOfType("Component").size() == 1);
        CHECK(tgt.nodesOfType("Port").size() == 1);
        CHECK(tgt.edgesOfType("connector").empty());
        checkMirrorsFresh(src, arch, tgt);
        CHECK(rep.uncovered == transformForward(src, arch).uncovered);
        CHECK(sess.checkConsistency().ok());
    }
    SUBCASE("deleting the wire drops only the connector") {
        src.applyChange(DeleteEdge{d.w1});
        SyncReport rep = sess.syncForward(src.snapshotJournal(sess.sourceCursor()));
        CHECK(rep.applicationsRevoked.size() == 1);
        CHECK(rep.deleted == 1);
        CHECK(tgt.nodesOfType("Port").size() == 2);
        checkMirrorsFresh(src, arch, tgt);
    }
    SUBCASE("deleting the container clears the view") {
        src.applyChange(DeleteNode{d.c1});
        SyncReport rep = sess.syncForward(src.snapshotJournal(sess.sourceCursor()));
        CHECK(rep.applicationsRevoked.size() == 7);
        CHECK(tgt.nodes().empty());
        CHECK(tgt.edges().empty());
        CHECK(sess.corr().applications().empty());
        CHECK(sess.corr().corrNodes().empty());
        checkMirrorsFresh(src, arch, tgt);
    }
}

TEST_CASE("sync: attribute edits update, revoke and re-fire applications") {
    Model src("ejb", ejbMeta());
    DemoIds d = seedDemo(src);
    Model tgt("arch", archMeta());
    RuleSet arch = archRules();
    SyncSession sess(src, tgt, arch);
    sess.syncForward(src.snapshotJournal(0));

    SUBCASE("bean rename updates the component") {
        src.applyChange(SetAttribute{d.b1, "name", std::string("checkout")});
        SyncReport rep = sess.syncForward(src.snapshotJournal(sess.sourceCursor()));
        CHECK(rep.attributesUpdated == 1);
        CHECK(rep.applicationsRevoked.empty());
        CHECK(nodeNamed(tgt, "Component", "checkout") != nullptr);
        checkMirrorsFresh(src, arch, tgt);
    }
    SUBCASE("interface rename breaks and then repairs the wire") {
        src.applyChange(SetAttribute{d.i2, "name", std::string("IOther")});
        SyncReport r1 = sess.syncForward(src.snapshotJournal(sess.sourceCursor()));
        CHECK(r1.attributesUpdated == 1); // the port follows the interface
        CHECK(r1.applicationsRevoked.size() == 1);
        CHECK(r1.deleted == 1);
        CHECK(tgt.edgesOfType("connector").empty());
        checkMirrorsFresh(src, arch, tgt);

        src.applyChange(SetAttribute{d.i2, "name", std::string("IInventory")});
        SyncReport r2 = sess.syncForward(src.snapshotJournal(sess.sourceCursor()));
        CHECK(r2.attributesUpdated == 1);
        CHECK(r2.applicationsAdded.size() == 1);
        CHECK(r2.created == 1);
        CHECK(tgt.edgesOfType("connector").size() == 1);
        checkMirrorsFresh(src, arch, tgt);
        CHECK(sess.checkConsistency().ok());
    }
}

TEST_CASE("sync: counter updates keep the performance view current") {
    Model src("ejb", ejbMeta());
    DemoIds d = seedDemo(src);
    Model tgt("perf", perfMeta());
    RuleSet perf = perfRules();
    SyncSession sess(src, tgt, perf);
    sess.syncForward(src.snapshotJournal(0));

    src.applyChange(SetAttribute{d.b1, "callCount", std::int64_t(26)});
    src.applyChange(SetAttribute{d.b1, "totalTimeMs", std::int64_t(3010)});
    SyncReport rep = sess.syncForward(src.snapshotJournal(sess.sourceCursor()));
    CHECK(rep.attributesUpdated == 2);
    CHECK(rep.applicationsAdded.empty());
    CHECK(rep.touchedElementCount < 30);
    const Node* shop = nodeNamed(tgt, "PerfComponent", "shop");
    REQUIRE(shop != nullptr);
    CHECK(std::get<std::int64_t>(shop->attributes.at("invocationCount")) == 26);
    CHECK(std::get<double>(shop->attributes.at("avgResponseTimeMs")) == 3010.0 / 26.0);
    checkMirrorsFresh(src, perf, tgt);
}

TEST_CASE("sync: backward edits adapt the source and reconverge") {
    Model src("ejb", ejbMeta());
    DemoIds d = seedDemo(src);
    Model tgt("arch", archMeta());
    RuleSet arch = archRules();
    SyncSession sess(src, tgt, arch);
    sess.syncForward(src.snapshotJournal(0));
    // catch the backward cursor up over the session's own forward writes
    CHECK(sess.syncBackward(tgt.snapshotJournal(sess.targetCursor())).quiet());

    SUBCASE("connector deletion removes the wire") {
        ElementId cn = *tgt.edgesOfType("connector").begin();
        tgt.applyChange(DeleteEdge{cn});
        SyncReport rep = sess.syncBackward(tgt.snapshotJournal(sess.targetCursor()));
        CHECK(rep.applicationsRevoked.size() == 1);
        CHECK(rep.deleted == 1);
        CHECK(src.edgesOfType("wire").empty());
        CHECK(src.findEdge(d.w1) == nullptr);
        // the source write loops back as an already-absorbed record
        CHECK(sess.syncForward(src.snapshotJournal(sess.sourceCursor())).quiet());
        CHECK(sess.checkConsistency().ok());
        checkMirrorsFresh(src, arch, tgt);
    }
    SUBCASE("component rename renames the bean") {
        const Node* shop = nodeNamed(tgt, "Component", "shop");
        REQUIRE(shop != nullptr);
        tgt.applyChange(SetAttribute{shop->id, "name", std::string("checkout")});
        SyncReport rep = sess.syncBackward(tgt.snapshotJournal(sess.targetCursor()));
        CHECK(rep.attributesUpdated == 1);
        CHECK(rep.applicationsRevoked.empty());
        CHECK(std::get<std::string>(src.findNode(d.b1)->attributes.at("name")) == "checkout");
        CHECK(sess.syncForward(src.snapshotJournal(sess.sourceCursor())).quiet());
        CHECK(sess.checkConsistency().ok());
        checkMirrorsFresh(src, arch, tgt);
    }
    SUBCASE("port deletion revokes the interface and the wire") {
        const Node* prov = nullptr;
        for (ElementId id : tgt.nodesOfType("Port")) {
            const Node* n = tgt.findNode(id);
            if (std::get<std::string>(n->attributes.at("direction")) == "provided") prov = n;
        }
        REQUIRE(prov != nullptr);
        tgt.applyChange(DeleteNode{prov->id});
        SyncReport rep = sess.syncBackward(tgt.snapshotJournal(sess.targetCursor()));
        CHECK(rep.applicationsRevoked.size() == 2);
        CHECK(rep.deleted == 3); // wire, providesInterface, interface
        CHECK(src.findNode(d.i2) == nullptr);
        CHECK(src.findEdge(d.w1) == nullptr);
        CHECK(src.findNode(d.b2) != nullptr);
        CHECK(sess.syncForward(src.snapshotJournal(sess.sourceCursor())).quiet());
        checkMirrorsFresh(src, arch, tgt);
    }
}

TEST_CASE("sync: cursor and direction discipline") {
    Model src = demoSource();
    Model tgt("arch", archMeta());
    RuleSet arch = archRules();
    SyncSession sess(src, tgt, arch);
    ChangeBatch full = src.snapshotJournal(0);

    ChangeBatch wrongId = full;
    wrongId.modelId = "other";
    CHECK_THROWS_AS(sess.syncForward(wrongId), ValidationError);

    sess.syncForward(full);
    CHECK_THROWS_AS(sess.syncForward(full), ValidationError); // stale cursor

    RuleSet perf = perfRules();
    Model ptgt("perf", perfMeta());
    SyncSession psess(src, ptgt, perf);
    CHECK_THROWS_AS(psess.syncBackward(ptgt.snapshotJournal(0)), ValidationError);

    Model wrongSrc("x", archMeta());
    CHECK_THROWS_AS(SyncSession(wrongSrc, tgt, arch), ValidationError);
    Model wrongTgt("y", ejbMeta());
    CHECK_THROWS_AS(SyncSession(src, wrongTgt, arch), ValidationError);
}

TEST_CASE("sync: incremental rounds touch a bounded neighborhood") {
    Model src("ejb", ejbMeta());
    ElementId c = addNode(src, "Container", {{"name", std::string("main")}});
    ElementId m = addNode(src, "EjbModule", {{"name", std::string("app")}});
    addEdge(src, "containsModule", c, m);
    std::vector<ElementId> beans;
    for (int i = 0; i < 40; ++i) {
        ElementId b = addNode(src, "SessionBean",
                              {{"name", "b" + std::to_string(i)},
                               {"kind", std::string("stateless")},
                               {"callCount", std::int64_t(4)},
                               {"totalTimeMs", std::int64_t(100)}});
        addEdge(src, "containsBean", m, b);
        beans.push_back(b);
    }

    RuleSet perf = perfRules();
    Model ptgt("perf", perfMeta());
    SyncSession psess(src, ptgt, perf);
    SyncReport initial = psess.syncForward(src.snapshotJournal(0));
    CHECK(initial.applicationsAdded.size() == 42);

    src.applyChange(SetAttribute{beans[7], "callCount", std::int64_t(5)});
    src.applyChange(SetAttribute{beans[7], "totalTimeMs", std::int64_t(140)});
    SyncReport rep = psess.syncForward(src.snapshotJournal(psess.sourceCursor()));
    CHECK(rep.attributesUpdated == 2);
    CHECK(rep.touchedElementCount > 0);
    CHECK(rep.touchedElementCount < 30);

    RuleSet arch = archRules();
    Model atgt("arch", archMeta());
    SyncSession asess(src, atgt, arch);
    asess.syncForward(src.snapshotJournal(0));
    ElementId nb = addNode(src, "SessionBean", {{"name", std::string("late")},
                                                {"kind", std::string("stateless")},
                                                {"callCount", std::int64_t(0)},
                                                {"totalTimeMs", std::int64_t(0)}});
    addEdge(src, "containsBean", m, nb);
    SyncReport arep = asess.syncForward(src.snapshotJournal(asess.sourceCursor()));
    CHECK(arep.applicationsAdded.size() == 1);
    CHECK(arep.touchedElementCount < 30);
    checkMirrorsFresh(src, arch, atgt);
}

TEST_CASE("sync: fuzzed edit histories stay equivalent to fresh transforms") {
    RuleSet arch = archRules();
    for (std::uint32_t seed = 1; seed <= 8; ++seed) {
        CAPTURE(seed);
        std::mt19937 rng(seed);
        testsupport::MutationFuzzer fuzz(rng);
        Model src("ejb", ejbMeta());
        seedDemo(src);
        Model tgt("arch", archMeta());
        SyncSession sess(src, tgt, arch);

        for (int round = 0; round < 10; ++round) {
            CAPTURE(round);
            for (int k = 0; k < 6; ++k) fuzz.mutate(src);
            SyncReport rep = sess.syncForward(src.snapshotJournal(sess.sourceCursor()));
            TransformResult fresh = transformForward(src, arch, "fresh");
            REQUIRE(isomorphic(tgt, fresh.output).isomorphic);
            REQUIRE(rep.uncovered == fresh.uncovered);
            REQUIRE(sess.checkConsistency().ok());
        }

        // adaptation tail: drop a connector, rename a component, reconcile
        CHECK(sess.syncBackward(tgt.snapshotJournal(sess.targetCursor())).quiet());
        auto conns = tgt.edgesOfType("connector");
        if (!conns.empty()) tgt.applyChange(DeleteEdge{*conns.begin()});
        auto comps = tgt.nodesOfType("Component");
        if (!comps.empty())
            tgt.applyChange(SetAttribute{*comps.begin(), "name", std::string("adapted")});
        sess.syncBackward(tgt.snapshotJournal(sess.targetCursor()));
        REQUIRE(sess.syncForward(src.snapshotJournal(sess.sourceCursor())).quiet());
        REQUIRE(sess.checkConsistency().ok());
        TransformResult fresh = transformForward(src, arch, "fresh");
        REQUIRE(isomorphic(tgt, fresh.output).isomorphic);
    }
}

TEST_CASE("sync: forward-only views stay equivalent under fuzz") {
    auto run = [](const RuleSet& rules, const char* tgtMetaName, std::uint32_t seed) {
        CAPTURE(tgtMetaName);
        CAPTURE(seed);
        std::mt19937 rng(seed);
        testsupport::MutationFuzzer fuzz(rng);
        Model src("ejb", ejbMeta());
        seedDemo(src);
        Model tgt("view", rules.targetMeta ? rules.targetMeta : perfMeta());
        SyncSession sess(src, tgt, rules);
        for (int round = 0; round < 8; ++round) {
            CAPTURE(round);
            for (int k = 0; k < 6; ++k) fuzz.mutate(src);
            SyncReport rep = sess.syncForward(src.snapshotJournal(sess.sourceCursor()));
            TransformResult fresh = transformForward(src, rules, "fresh");
            REQUIRE(isomorphic(tgt, fresh.output).isomorphic);
            REQUIRE(rep.uncovered == fresh.uncovered);
            REQUIRE(sess.checkConsistency().ok());
        }
    };
    RuleSet perf = perfRules();
    RuleSet fail = failRules();
    for (std::uint32_t seed = 1; seed <= 4; ++seed) {
        run(perf, "perf-view", seed);
        run(fail, "fail-view", seed);
    }
}

TEST_CASE("corr: serialization round-trips and resumes sessions") {
    Model src("ejb", ejbMeta());
    DemoIds d = seedDemo(src);
    Model tgt("arch", archMeta());
    RuleSet arch = archRules();
    SyncSession sess(src, tgt, arch);
    sess.syncForward(src.snapshotJournal(0));

    std::string text = saveCorrespondence(sess.corr());
    CorrespondenceModel loaded = loadCorrespondence(text);
    CHECK(saveCorrespondence(loaded) == text);
    CHECK(loaded.applications().size() == 7);
    CHECK(loaded.corrNodes().size() == 6);

    SyncSession resumed(src, tgt, arch, std::move(loaded), sess.sourceCursor(),
                        sess.targetCursor());
    CHECK(resumed.syncForward(src.snapshotJournal(resumed.sourceCursor())).quiet());
    ElementId b3 = addNode(src, "SessionBean", {{"name", std::string("late")},
                                                {"kind", std::string("stateless")},
                                                {"callCount", std::int64_t(0)},
                                                {"totalTimeMs", std::int64_t(0)}});
    addEdge(src, "containsBean", d.m1, b3);
    SyncReport rep = resumed.syncForward(src.snapshotJournal(resumed.sourceCursor()));
    CHECK(rep.applicationsAdded.size() == 1);
    checkMirrorsFresh(src, arch, tgt);

    auto j = nlohmann::json::parse(text);
    j["applications"][0]["id"] = j["applications"][1]["id"];
    CHECK_THROWS_AS(loadCorrespondence(j.dump()), ValidationError);
    auto j2 = nlohmann::json::parse(text);
    j2["corrNodes"][0]["owner"] = 4242;
    CHECK_THROWS_AS(loadCorrespondence(j2.dump()), ValidationError);
}

TEST_CASE("consistency: corruption is detected and classified") {
    Model src = demoSource();
    Model tgt("arch", archMeta());
    RuleSet arch = archRules();
    SyncSession sess(src, tgt, arch);
    sess.syncForward(src.snapshotJournal(0));
    REQUIRE(sess.checkConsistency().ok());

    SUBCASE("attribute drift") {
        const Node* shop = nodeNamed(tgt, "Component", "shop");
        REQUIRE(shop != nullptr);
        {
            auto w = tgt.write();
            w.apply(SetAttribute{shop->id, "name", std::string("junk")});
        }
        ConsistencyReport rep = sess.checkConsistency();
        REQUIRE(rep.findings.size() == 1);
        CHECK(rep.findings[0].condition == "constraint-violated");
        CHECK(sess.corr().findApplication(rep.findings[0].application)->ruleName ==
              "session-bean-to-component");
    }
    SUBCASE("missing element") {
        const Node* prov = nullptr;
        for (ElementId id : tgt.nodesOfType("Port")) {
            const Node* n = tgt.findNode(id);
            if (std::get<std::string>(n->attributes.at("direction")) == "provided") prov = n;
        }
        REQUIRE(prov != nullptr);
        tgt.removeNodeRaw(prov->id); // raw: no cascade, no journal
        ConsistencyReport rep = sess.checkConsistency();
        REQUIRE(rep.findings.size() == 2); // the port rule and the wire rule both bind it
        for (const auto& f : rep.findings) CHECK(f.condition == "missing-element");
    }
    SUBCASE("broken edge") {
        ElementId cnId = *tgt.edgesOfType("connector").begin();
        const Edge e = *tgt.findEdge(cnId);
        tgt.removeEdgeRaw(cnId);
        tgt.insertEdgeRaw({e.id, e.type, e.target, e.target});
        ConsistencyReport rep = sess.checkConsistency();
        REQUIRE(rep.findings.size() == 1);
        CHECK(rep.findings[0].condition == "broken-edge");
    }
    SUBCASE("type mismatch") {
        const Node* shop = nodeNamed(tgt, "Component", "shop");
        REQUIRE(shop != nullptr);
        const Node n = *shop;
        tgt.removeNodeRaw(n.id);
        tgt.insertNodeRaw({n.id, "Port", {{"interfaceName", std::string("x")},
                                          {"direction", std::string("provided")}}});
        ConsistencyReport rep = sess.checkConsistency();
        REQUIRE_FALSE(rep.ok());
        bool saw = false;
        for (const auto& f : rep.findings)
            if (f.condition == "type-mismatch") saw = true;
        CHECK(saw);
    }
    SUBCASE("corr link set tampering") {
        auto j = nlohmann::json::parse(saveCorrespondence(sess.corr()));
        j["corrNodes"][0]["source"] = nlohmann::json::array();
        CorrespondenceModel corr = loadCorrespondence(j.dump());
        SyncSession s2(src, tgt, arch, std::move(corr), sess.sourceCursor(), sess.targetCursor());
        ConsistencyReport rep = s2.checkConsistency();
        REQUIRE_FALSE(rep.ok());
        bool saw = false;
        for (const auto& f : rep.findings)
            if (f.condition == "corr-dangling") saw = true;
        CHECK(saw);
    }
    SUBCASE("unknown rule") {
        auto j = nlohmann::json::parse(saveCorrespondence(sess.corr()));
        j["applications"][0]["rule"] = "ghost";
        CorrespondenceModel corr = loadCorrespondence(j.dump());
        SyncSession s2(src, tgt, arch, std::move(corr), sess.sourceCursor(), sess.targetCursor());
        ConsistencyReport rep = s2.checkConsistency();
        REQUIRE_FALSE(rep.ok());
        CHECK(rep.findings[0].condition == "unknown-rule");
    }
    SUBCASE("missing dependency") {
        auto j = nlohmann::json::parse(saveCorrespondence(sess.corr()));
        j["applications"].back()["dependsOn"] = nlohmann::json::array({999});
        CorrespondenceModel corr = loadCorrespondence(j.dump());
        SyncSession s2(src, tgt, arch, std::move(corr), sess.sourceCursor(), sess.targetCursor());
        ConsistencyReport rep = s2.checkConsistency();
        REQUIRE_FALSE(rep.ok());
        bool saw = false;
        for (const auto& f : rep.findings)
            if (f.condition == "missing-dependency") saw = true;
        CHECK(saw);
    }
}

TEST_CASE("reports: stable json rendering") {
    Model src = demoSource();
    Model tgt("arch", archMeta());
    RuleSet arch = archRules();
    SyncSession sess(src, tgt, arch);
    SyncReport rep = sess.syncForward(src.snapshotJournal(0));

    std::string text = syncReportJson(rep);
    REQUIRE_FALSE(text.empty());
    CHECK(text.back() == '\n');
    auto parsed = nlohmann::json::parse(text);
    CHECK(parsed["applicationsAdded"].size() == 7);
    CHECK(parsed["created"] == 10);
    CHECK(parsed["deleted"] == 0);
    CHECK(parsed["quiet"] == false);
    CHECK(parsed["uncovered"].size() == 2);

    auto crep = sess.checkConsistency();
    auto cj = nlohmann::json::parse(consistencyReportJson(crep));
    CHECK(cj["ok"] == true);
    CHECK(cj["findings"].empty());
}

TEST_CASE("engine: affine constraints scale forward attributes") {
    auto pd = rulesetDoc("perf-rules");
    pd["rules"][2]["attributes"][2]["expr"] =
        nlohmann::json::parse(R"({"affine":{"of":"b.callCount","a":2.0,"b":5.0}})");
    RuleSet rs = loadRuleSet(pd.dump(), ejbMeta(), perfMeta());
    Model src = demoSource();
    TransformResult res = transformForward(src, rs);
    const Node* shop = nodeNamed(res.output, "PerfComponent", "shop");
    REQUIRE(shop != nullptr);
    CHECK(std::get<double>(shop->attributes.at("avgResponseTimeMs")) == 2.0 * 25 + 5.0);
}
