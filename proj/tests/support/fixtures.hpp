#pragma once

#include <filesystem>
#include <memory>
#include <string>

#include "rtsync/model/io.hpp"

namespace testsupport {

inline std::filesystem::path fixturesDir() { return RTSYNC_FIXTURES_DIR; }
inline std::filesystem::path goldenDir() { return RTSYNC_GOLDEN_DIR; }

inline std::filesystem::path metaModelPath(const std::string& name) {
    return fixturesDir() / "metamodels" / (name + ".json");
}
inline std::filesystem::path ruleSetPath(const std::string& name) {
    return fixturesDir() / "rulesets" / (name + ".json");
}
inline std::filesystem::path scenarioPath(const std::string& name) {
    return fixturesDir() / "scenarios" / (name + ".json");
}

inline std::shared_ptr<const rtsync::MetaModel> loadMeta(const std::string& name) {
    return std::make_shared<rtsync::MetaModel>(rtsync::io::loadMetaModelFile(metaModelPath(name)));
}

} // namespace testsupport
