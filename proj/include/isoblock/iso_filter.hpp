#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "isoblock/block.hpp"
#include "isoblock/invariants.hpp"
#include "isoblock/model.hpp"

namespace isoblock {

/// Elements of one model grouped by equal invariant vectors. Class ids
/// follow the lexicographic order of the vectors, so two models with the
/// same key have classes that correspond id by id.
struct ElementClassing {
    std::vector<InvariantVector> vectors;
    std::vector<int> class_of;
    std::vector<std::vector<Element>> classes;
};

ElementClassing classify(const Model &m);

/// Searches for p with apply_permutation(a, p) == b. Elements of `a` are
/// only mapped onto elements of `b` in the matching class. Relations must be
/// carried onto each other exactly. Throws ModelError if the signatures
/// differ; models of different order are never isomorphic.
std::optional<Permutation> are_isomorphic(const Model &a, const Model &b);
std::optional<Permutation> are_isomorphic(const Model &a, const ElementClassing &ca, const Model &b,
                                          const ElementClassing &cb);

inline constexpr int default_oracle_max_order = 7;

/// Exhaustive check over all n! permutations, for testing. Throws ModelError
/// above `max_order`.
bool oracle_isomorphic(const Model &a, const Model &b, int max_order = default_oracle_max_order);

struct Duplicate {
    std::size_t model;
    std::size_t representative;
    /// Maps the representative onto the duplicate.
    Permutation witness;
};

struct FilterResult {
    /// Model indices kept, in input order.
    std::vector<std::size_t> representatives;
    /// Filled only when explain is requested.
    std::vector<Duplicate> duplicates;
    std::size_t isomorphism_tests = 0;
};

/// Keeps each member unless it is isomorphic to an already kept member.
FilterResult filter_block(std::span<const Model> models, const Block &block, bool explain = false);

/// filter_block for every block on up to `jobs` threads, largest blocks
/// first. Results are indexed by block, independent of `jobs`.
std::vector<FilterResult> filter_blocks(std::span<const Model> models, std::span<const Block> blocks,
                                        unsigned jobs = 1, bool explain = false);

} // namespace isoblock
