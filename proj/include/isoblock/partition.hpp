#pragma once

#include <span>
#include <vector>

#include "isoblock/block.hpp"
#include "isoblock/invariants.hpp"
#include "isoblock/model.hpp"
#include "isoblock/random_invariants.hpp"

namespace isoblock {

/// Sorts the rows lexicographically and serializes them. The encoding is
/// the row count, the row width, then every value, each as a 32-bit
/// big-endian integer.
ModelKey make_key(std::vector<InvariantVector> rows);

ModelKey model_key(const Model &m, std::span<const RandomInvariant> extras = {});

/// Groups positions with equal keys. Blocks appear in order of first
/// occurrence and list members in input order.
std::vector<Block> group_by_key(std::span<const ModelKey> keys);

/// Keys are computed on up to `jobs` threads; the result does not depend on
/// `jobs`. Throws ModelError if the models do not share one signature.
std::vector<Block> partition(std::span<const Model> models, std::span<const RandomInvariant> extras = {},
                             unsigned jobs = 1);

} // namespace isoblock
