#pragma once

#include <filesystem>
#include <memory>
#include <string>

#include "rtsync/model/model.hpp"

namespace rtsync::io {

/// Parses and validates a metamodel document. Throws ParseError on
/// malformed input, ValidationError on schema violations.
MetaModel loadMetaModel(const std::string& jsonText);
MetaModel loadMetaModelFile(const std::filesystem::path& path);

/// Canonical serialization: type entries ordered by name, fields
/// alphabetical. load-then-save is stable.
std::string saveMetaModel(const MetaModel& mm);

/// Loads a model instance document. Structure only; run validate() for
/// conformance. Element ids are preserved, the id watermark advances past
/// the maximum id in the file.
Model loadModel(const std::string& jsonText, std::shared_ptr<const MetaModel> mm);
Model loadModelFile(const std::filesystem::path& path, std::shared_ptr<const MetaModel> mm);

/// Canonical serialization: nodes and edges ordered by id, attributes by
/// name. The journal is not serialized.
std::string saveModel(const Model& model);

void writeFile(const std::filesystem::path& path, const std::string& content);
/// ParseError when the file cannot be read, like the document loaders built on it.
std::string readFile(const std::filesystem::path& path);

} // namespace rtsync::io
