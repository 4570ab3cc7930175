#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <ostream>
#include <string>
#include <vector>

namespace rtsync::cli {

// Shared exit codes. Parse failures cover unreadable or malformed input
// files; validation failures cover well-formed input that breaks a model,
// rule or config constraint (and, for check, a consistency report with
// findings). Scenario faults carry the failing step in the diagnostic.
inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitParse = 3;
inline constexpr int kExitScenario = 4;

struct TransformArgs {
    std::filesystem::path metaSrc;
    std::filesystem::path metaTgt;
    std::filesystem::path rules;
    std::filesystem::path model;
    std::filesystem::path out;
    std::filesystem::path corrOut; // optional, empty skips
    std::string direction = "forward";
};

/// One-shot batch transformation: reads the input model (source side for
/// forward, target side for backward), writes the translated model and
/// optionally the correspondence model. Nothing is written on failure.
int cmdTransform(const TransformArgs& args, std::ostream& err);

struct SyncRunArgs {
    std::filesystem::path scenario;
    std::filesystem::path managersConfig;
    std::filesystem::path report;
    std::filesystem::path fixturesDir = "fixtures"; // metamodels/ and rulesets/ root
    std::size_t steps = 0;                          // 0 runs the whole script
    std::size_t triggerEvery = 1;
    bool adapt = false;
    bool parallel = false;
};

/// Drives the simulated runtime through the scenario while the three
/// autonomic managers observe it through their own sync sessions. Every
/// triggerEvery steps each manager pulls the pending source changes into
/// its view and analyzes it; with adapt set, an architecture cycle finding
/// is repaired through backward sync and the effector. After the last step
/// a final trigger round brings every view up to date, so the reported
/// digests equal batch transformations of the end state. The report is
/// byte-identical across runs of the same arguments.
int cmdSyncRun(const SyncRunArgs& args, std::ostream& err);

struct CheckArgs {
    std::filesystem::path metaSrc;
    std::filesystem::path metaTgt;
    std::filesystem::path rules;
    std::filesystem::path source;
    std::filesystem::path target;
    std::filesystem::path corr;
};

/// Loads a persisted source/target/correspondence triple and prints the
/// consistency report. Exit 0 when consistent, 2 when findings exist.
int cmdCheck(const CheckArgs& args, std::ostream& out, std::ostream& err);

struct BenchArgs {
    std::filesystem::path metaSrc;
    std::filesystem::path metaTgt;
    std::filesystem::path rules;
    std::filesystem::path out; // optional, empty prints to `out` stream only
    std::vector<std::size_t> sizes = {100, 500, 1000};
};

/// Incremental-versus-batch scaling probe. For each size n: build a source
/// with n beans, sync it, apply one bean deployment and measure the
/// touched-element count of the incremental sync against a fresh batch
/// transformation of the same end state.
int cmdBench(const BenchArgs& args, std::ostream& out, std::ostream& err);

} // namespace rtsync::cli
