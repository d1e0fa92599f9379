#pragma once

#include <array>
#include <span>
#include <string>
#include <vector>

#include "isoblock/model.hpp"
#include "isoblock/random_invariants.hpp"

namespace isoblock {

/// Per-element invariant values. Layout: for each signature entry in
/// declaration order, a unary function contributes U1-U4, a binary function
/// B1-B10, a ternary function T1 and a binary relation R1-R4; constants and
/// unary relations contribute nothing. One slot per random invariant follows.
using InvariantVector = std::vector<InvariantValue>;

/// U1 fixed point, U2 2-cycle, U3 |g^-1(x)|, U4 |(g o g)^-1(x)|.
std::array<InvariantValue, 4> unary_invariants(const Model &m, std::size_t entry, Element x);

/// B1 periodicity, B2 inverses, B3 right ideal, B4 left ideal,
/// B5 idempotency, B6 commuting squares, B7 square roots,
/// B8 square associatizers, B9 commuting pairs, B10 conjugates.
///
/// Powers associate to the left. B1 is the least t with x^t = x^k for some
/// 1 <= k < t, so 2 <= B1 <= n + 1. B9 counts ordered pairs (y, z) with
/// y*z = z*y = x; B10 counts distinct y = t*s over all s*t = x.
std::array<InvariantValue, 10> binary_invariants(const Model &m, std::size_t entry, Element x);

/// R1 out-degree, R2 in-degree, R3 reflexive, R4 symmetric neighbours.
std::array<InvariantValue, 4> relation_invariants(const Model &m, std::size_t entry, Element x);

/// T1: number of cells of the ternary table holding x.
InvariantValue ternary_invariant(const Model &m, std::size_t entry, Element x);

/// Number of basic slots the signature produces.
std::size_t basic_width(const Signature &sig);

/// Human-readable slot labels such as `*.B3` or `r1`, matching the layout.
std::vector<std::string> slot_names(const Signature &sig, std::size_t random_count);

InvariantVector element_vector(const Model &m, Element x, std::span<const RandomInvariant> extras = {});

/// element_vector for every element of `m`, index = element.
std::vector<InvariantVector> element_vectors(const Model &m, std::span<const RandomInvariant> extras = {});

} // namespace isoblock
