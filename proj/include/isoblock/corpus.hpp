#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include "isoblock/model.hpp"

namespace isoblock {

/// Built-in axiom sets over one binary operation `*`.
enum class AxiomSet { magma, semigroup, commutative_magma, quasigroup, band, commutative_semigroup };

std::optional<AxiomSet> parse_axiom_set(std::string_view name);
std::string_view to_string(AxiomSet axioms);

/// Largest order enumerated unless the caller raises the bound.
int default_max_order(AxiomSet axioms);

/// Full-table check of the axioms on a finished model.
bool satisfies(AxiomSet axioms, const Model &m);

/// All labeled models of the given order, without symmetry breaking, in
/// lexicographic order of their tables. Throws ModelError above the bound.
std::vector<Model> enumerate_models(AxiomSet axioms, int order, std::optional<int> max_order = std::nullopt);

SignaturePtr binary_signature();

} // namespace isoblock
