#pragma once

#include <cstdint>
#include <string>

#include "rtsync/model/model.hpp"

namespace rtsync {

/// Content digest over a model's typed attributed graph structure.
///
/// The digest is independent of element ids and insertion order: two models
/// are guaranteed to digest equally if they are isomorphic (same node/edge
/// types, attributes, and wiring), and unequal digests prove non-isomorphism.
/// Node signatures start from type plus attributes and are refined three
/// rounds by hashing the sorted multiset of (edge type, direction, neighbour
/// signature) triples, then the whole model folds the sorted node and edge
/// signatures through FNV-1a.
std::uint64_t contentDigest(const Model& model);

/// contentDigest rendered as 16 lowercase hex digits.
std::string contentDigestHex(const Model& model);

} // namespace rtsync
