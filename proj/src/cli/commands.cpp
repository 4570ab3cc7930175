#include "rtsync/cli/commands.hpp"

#include <array>
#include <exception>
#include <functional>
#include <memory>
#include <thread>

#include <json.hpp>

#include "rtsync/errors.hpp"
#include "rtsync/model/digest.hpp"
#include "rtsync/model/io.hpp"
#include "rtsync/sim/effectors.hpp"
#include "rtsync/sim/sensors.hpp"
#include "rtsync/tgg/io.hpp"
#include "rtsync/tgg/transform.hpp"
#include "rtsync/views/manager.hpp"

namespace rtsync::cli {

namespace {

using nlohmann::json;

int guard(std::ostream& err, const std::function<int()>& body) {
    try {
        return body();
    } catch (const ParseError& e) {
        err << "parse error: " << e.what() << '\n';
        return kExitParse;
    } catch (const ScenarioError& e) {
        err << "scenario fault: " << e.what() << '\n';
        return kExitScenario;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return kExitValidation;
    }
}

std::shared_ptr<const MetaModel> loadMeta(const std::filesystem::path& path) {
    return std::make_shared<const MetaModel>(io::loadMetaModelFile(path));
}

json findingJson(const views::Finding& f) {
    json j;
    j["atSyncSeq"] = f.atSyncSeq;
    j["manager"] = f.manager;
    j["message"] = f.message;
    j["severity"] = f.severity;
    j["subjects"] = f.subjects;
    return j;
}

} // namespace

int cmdTransform(const TransformArgs& args, std::ostream& err) {
    return guard(err, [&]() -> int {
        if (args.direction != "forward" && args.direction != "backward")
            throw ValidationError("direction must be forward or backward, got '" + args.direction +
                                  "'");
        auto srcMeta = loadMeta(args.metaSrc);
        auto tgtMeta = loadMeta(args.metaTgt);
        auto rules = tgg::loadRuleSetFile(args.rules, srcMeta, tgtMeta);
        bool forward = args.direction == "forward";
        Model input = io::loadModelFile(args.model, forward ? srcMeta : tgtMeta);
        auto result = forward ? tgg::transformForward(input, rules)
                              : tgg::transformBackward(input, rules);
        io::writeFile(args.out, io::saveModel(result.output));
        if (!args.corrOut.empty())
            io::writeFile(args.corrOut, tgg::saveCorrespondence(result.corr));
        return kExitOk;
    });
}

int cmdSyncRun(const SyncRunArgs& args, std::ostream& err) {
    return guard(err, [&]() -> int {
        if (args.triggerEvery == 0) throw ValidationError("trigger-every must be positive");
        auto scenario = sim::loadScenarioFile(args.scenario.string());
        auto cfg = views::loadManagerConfigFile(args.managersConfig);

        auto metaDir = args.fixturesDir / "metamodels";
        auto ruleDir = args.fixturesDir / "rulesets";
        auto srcMeta = loadMeta(metaDir / "ejb-source.json");
        auto archRules = tgg::loadRuleSetFile(ruleDir / "arch-rules.json", srcMeta,
                                              loadMeta(metaDir / "arch-view.json"));
        auto perfRules = tgg::loadRuleSetFile(ruleDir / "perf-rules.json", srcMeta,
                                              loadMeta(metaDir / "perf-view.json"));
        auto failRules = tgg::loadRuleSetFile(ruleDir / "fail-rules.json", srcMeta,
                                              loadMeta(metaDir / "fail-view.json"));

        Model src("ejb", srcMeta);
        sim::Runtime rt(scenario.seed);
        std::array<std::unique_ptr<views::AutonomicManager>, 3> mgrs = {
            std::make_unique<views::AutonomicManager>(src, archRules, cfg),
            std::make_unique<views::AutonomicManager>(src, perfRules, cfg),
            std::make_unique<views::AutonomicManager>(src, failRules, cfg),
        };

        std::size_t steps = args.steps == 0 ? scenario.steps.size() : args.steps;
        json report;
        report["config"] = {{"adapt", args.adapt},
                            {"parallel", args.parallel},
                            {"scenario", args.scenario.filename().string()},
                            {"steps", steps},
                            {"triggerEvery", args.triggerEvery}};
        report["adaptations"] = json::array();
        report["steps"] = json::array();

        struct Outcome {
            tgg::SyncReport sync;
            std::vector<views::Finding> findings;
        };

        auto triggerRound = [&](std::size_t stepIndex) {
            std::array<Outcome, 3> outs;
            if (args.parallel) {
                std::array<std::exception_ptr, 3> errors{};
                std::array<std::thread, 3> threads;
                for (std::size_t k = 0; k < 3; ++k)
                    threads[k] = std::thread([&, k] {
                        try {
                            outs[k].sync = mgrs[k]->triggerSync();
                            outs[k].findings = mgrs[k]->analyze(rt.clock());
                        } catch (...) {
                            errors[k] = std::current_exception();
                        }
                    });
                for (auto& t : threads) t.join();
                for (auto& e : errors)
                    if (e) std::rethrow_exception(e);
            } else {
                for (std::size_t k = 0; k < 3; ++k) {
                    outs[k].sync = mgrs[k]->triggerSync();
                    outs[k].findings = mgrs[k]->analyze(rt.clock());
                }
            }

            json triggers = json::array();
            for (std::size_t k = 0; k < 3; ++k) {
                json t;
                t["manager"] = mgrs[k]->name();
                t["sync"] = json::parse(tgg::syncReportJson(outs[k].sync));
                t["findings"] = json::array();
                for (const auto& f : outs[k].findings) t["findings"].push_back(findingJson(f));
                triggers.push_back(std::move(t));
            }

            if (args.adapt) {
                for (const auto& f : outs[0].findings) {
                    if (f.message.rfind("connector cycle: ", 0) != 0) continue;
                    auto proposal = views::proposeAdaptation(f, mgrs[0]->view());
                    std::uint64_t mark = src.journalSize();
                    auto backRep = mgrs[0]->session().syncBackward(proposal);
                    auto effRep = sim::applyEffector(rt, src, src.snapshotJournal(mark));
                    sim::pumpSensors(rt, src);
                    json a;
                    a["effector"] = json::parse(sim::effectorReportJson(effRep));
                    a["finding"] = f.message;
                    a["manager"] = mgrs[0]->name();
                    a["step"] = stepIndex;
                    a["sync"] = json::parse(tgg::syncReportJson(backRep));
                    report["adaptations"].push_back(std::move(a));
                    break; // at most one repair per round; the next round re-analyzes
                }
            }
            return triggers;
        };

        for (std::size_t i = 1; i <= steps; ++i) {
            rt.step(scenario, 1);
            sim::pumpSensors(rt, src);
            json entry;
            entry["step"] = i;
            entry["triggers"] = i % args.triggerEvery == 0 ? triggerRound(i) : json::array();
            report["steps"].push_back(std::move(entry));
        }

        // closing round so the reported digests describe the end state
        report["final"] = {{"triggers", triggerRound(steps)}};
        json digests;
        for (const auto& m : mgrs) digests[m->name() + "-view"] = contentDigestHex(m->view());
        digests["source"] = contentDigestHex(src);
        report["digests"] = std::move(digests);

        io::writeFile(args.report, report.dump(2) + "\n");
        return kExitOk;
    });
}

int cmdCheck(const CheckArgs& args, std::ostream& out, std::ostream& err) {
    return guard(err, [&]() -> int {
        auto srcMeta = loadMeta(args.metaSrc);
        auto tgtMeta = loadMeta(args.metaTgt);
        auto rules = tgg::loadRuleSetFile(args.rules, srcMeta, tgtMeta);
        Model src = io::loadModelFile(args.source, srcMeta);
        Model tgt = io::loadModelFile(args.target, tgtMeta);
        auto corr = tgg::loadCorrespondence(io::readFile(args.corr));
        tgg::SyncSession session(src, tgt, rules, std::move(corr), src.journalSize(),
                                 tgt.journalSize());
        auto rep = session.checkConsistency();
        out << tgg::consistencyReportJson(rep);
        return rep.ok() ? kExitOk : kExitValidation;
    });
}

int cmdBench(const BenchArgs& args, std::ostream& out, std::ostream& err) {
    return guard(err, [&]() -> int {
        if (args.sizes.empty()) throw ValidationError("at least one size is required");
        auto srcMeta = loadMeta(args.metaSrc);
        auto tgtMeta = loadMeta(args.metaTgt);
        auto rules = tgg::loadRuleSetFile(args.rules, srcMeta, tgtMeta);

        auto node = [](Model& m, const std::string& type, AttributeMap attrs) {
            return m.applyChange(CreateNode{type, std::move(attrs)}).element;
        };
        auto edge = [](Model& m, const std::string& type, ElementId s, ElementId t) {
            m.applyChange(CreateEdge{type, s, t});
        };
        auto addBean = [&](Model& m, ElementId module, std::size_t i) {
            ElementId bean = node(m, "SessionBean",
                                  {{"name", "bean" + std::to_string(i)},
                                   {"kind", std::string("stateless")},
                                   {"callCount", static_cast<std::int64_t>(i % 7)},
                                   {"totalTimeMs", static_cast<std::int64_t>(i % 7) * 12}});
            ElementId iface = node(m, "Interface", {{"name", "I" + std::to_string(i)}});
            edge(m, "containsBean", module, bean);
            edge(m, "providesInterface", bean, iface);
        };

        json rows = json::array();
        for (std::size_t n : args.sizes) {
            Model src("ejb-bench", srcMeta);
            ElementId container = node(src, "Container", {{"name", std::string("main")}});
            ElementId module = node(src, "EjbModule", {{"name", std::string("app")}});
            edge(src, "containsModule", container, module);
            for (std::size_t i = 0; i < n; ++i) addBean(src, module, i);

            Model view("bench-view", tgtMeta);
            tgg::SyncSession session(src, view, rules);
            session.syncForward(src.snapshotJournal(0));

            std::uint64_t mark = session.sourceCursor();
            addBean(src, module, n);
            auto incremental = session.syncForward(src.snapshotJournal(mark));
            auto batch = tgg::transformForward(src, rules);

            json row;
            row["size"] = n;
            row["touchedBatch"] = batch.touchedElementCount;
            row["touchedIncremental"] = incremental.touchedElementCount;
            rows.push_back(std::move(row));
        }

        json table;
        table["rows"] = std::move(rows);
        std::string text = table.dump(2) + "\n";
        out << text;
        if (!args.out.empty()) io::writeFile(args.out, text);
        return kExitOk;
    });
}

} // namespace rtsync::cli
