#pragma once

#include <memory>
#include <string>

#include "rtsync/model/model.hpp"
#include "rtsync/sim/runtime.hpp"

namespace rtsync::sim {

/// Diffs the runtime against the source model and applies the minimal set
/// of changes that makes the model reflect runtime structure, counters and
/// exception history exactly. Returns the batch of records produced; an
/// immediate second call returns an empty batch. The model is pump-owned:
/// it must conform to the EJB source metamodel and only ever be written by
/// this pump or by backward synchronization.
ChangeBatch pumpSensors(const Runtime& runtime, Model& source);

/// Fresh source model built from scratch for the current runtime state;
/// the batch-shaped oracle for what an incrementally pumped model must be
/// isomorphic to.
Model runtimeModel(const Runtime& runtime, std::shared_ptr<const MetaModel> meta,
                   const std::string& modelId);

} // namespace rtsync::sim
