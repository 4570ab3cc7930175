#pragma once

#include <filesystem>
#include <memory>
#include <string>

#include "rtsync/tgg/correspondence.hpp"
#include "rtsync/tgg/rule.hpp"
#include "rtsync/tgg/sync.hpp"

namespace rtsync::tgg {

/// Parses, validates and plan-compiles a ruleset document against the two
/// metamodels. ParseError on malformed JSON, ValidationError naming the
/// rule and invariant otherwise.
RuleSet loadRuleSet(const std::string& jsonText, std::shared_ptr<const MetaModel> srcMeta,
                    std::shared_ptr<const MetaModel> tgtMeta);
RuleSet loadRuleSetFile(const std::filesystem::path& path,
                        std::shared_ptr<const MetaModel> srcMeta,
                        std::shared_ptr<const MetaModel> tgtMeta);

std::string saveCorrespondence(const CorrespondenceModel& corr);
CorrespondenceModel loadCorrespondence(const std::string& jsonText);

/// Stable-order JSON renderings for reports (golden-file friendly).
std::string syncReportJson(const SyncReport& report);
std::string consistencyReportJson(const ConsistencyReport& report);

} // namespace rtsync::tgg
