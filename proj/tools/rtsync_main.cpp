#include <iostream>

#include <CLI11.hpp>

#include "rtsync/cli/commands.hpp"

int main(int argc, char** argv) {
    CLI::App app{"runtime model synchronization harness"};
    app.require_subcommand(1);
    int rc = rtsync::cli::kExitOk;

    rtsync::cli::TransformArgs ta;
    auto* transform = app.add_subcommand("transform", "one-shot batch transformation");
    transform->add_option("--meta-src", ta.metaSrc, "source metamodel file")->required();
    transform->add_option("--meta-tgt", ta.metaTgt, "target metamodel file")->required();
    transform->add_option("--rules", ta.rules, "ruleset file")->required();
    transform->add_option("--model", ta.model, "input model file")->required();
    transform->add_option("--out", ta.out, "output model file")->required();
    transform->add_option("--corr", ta.corrOut, "correspondence output file");
    transform->add_option("--direction", ta.direction, "forward or backward")
        ->capture_default_str();
    transform->callback([&] { rc = rtsync::cli::cmdTransform(ta, std::cerr); });

    rtsync::cli::SyncRunArgs sa;
    auto* syncRun =
        app.add_subcommand("sync-run", "drive a scenario under the three autonomic managers");
    syncRun->add_option("--scenario", sa.scenario, "scenario script file")->required();
    syncRun->add_option("--managers", sa.managersConfig, "manager config file")->required();
    syncRun->add_option("--report", sa.report, "run report output file")->required();
    syncRun->add_option("--fixtures", sa.fixturesDir, "directory holding metamodels/ and rulesets/")
        ->capture_default_str();
    syncRun->add_option("--steps", sa.steps, "steps to execute, 0 runs the whole script")
        ->capture_default_str();
    syncRun->add_option("--trigger-every", sa.triggerEvery, "manager trigger period in steps")
        ->capture_default_str();
    syncRun->add_flag("--adapt", sa.adapt, "repair architecture cycle findings via backward sync");
    syncRun->add_flag("--parallel", sa.parallel, "run the three managers on separate threads");
    syncRun->callback([&] { rc = rtsync::cli::cmdSyncRun(sa, std::cerr); });

    rtsync::cli::CheckArgs ca;
    auto* check = app.add_subcommand("check", "consistency check of a persisted session");
    check->add_option("--meta-src", ca.metaSrc, "source metamodel file")->required();
    check->add_option("--meta-tgt", ca.metaTgt, "target metamodel file")->required();
    check->add_option("--rules", ca.rules, "ruleset file")->required();
    check->add_option("--source", ca.source, "source model file")->required();
    check->add_option("--target", ca.target, "target model file")->required();
    check->add_option("--corr", ca.corr, "correspondence model file")->required();
    check->callback([&] { rc = rtsync::cli::cmdCheck(ca, std::cout, std::cerr); });

    rtsync::cli::BenchArgs ba;
    auto* bench = app.add_subcommand("bench", "incremental versus batch scaling probe");
    bench->add_option("--meta-src", ba.metaSrc, "source metamodel file")->required();
    bench->add_option("--meta-tgt", ba.metaTgt, "target metamodel file")->required();
    bench->add_option("--rules", ba.rules, "ruleset file")->required();
    bench->add_option("--sizes", ba.sizes, "model sizes to probe")->delimiter(',');
    bench->add_option("--out", ba.out, "also write the table to this file");
    bench->callback([&] { rc = rtsync::cli::cmdBench(ba, std::cout, std::cerr); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : rtsync::cli::kExitValidation;
    }
    return rc;
}
