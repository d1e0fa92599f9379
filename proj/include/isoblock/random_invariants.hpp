#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "isoblock/block.hpp"
#include "isoblock/model.hpp"

namespace isoblock {

using InvariantValue = std::uint32_t;

class FormulaError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A term over the unary and binary functions of a signature. Leaves are
/// variables x0, x1, ...; internal nodes apply a named function.
struct Expr {
    enum class Kind { variable, unary, binary };

    Kind kind = Kind::variable;
    int variable = 0;
    std::string op;
    std::vector<Expr> args;

    static Expr var(int index) { return Expr{Kind::variable, index, {}, {}}; }
    static Expr apply(std::string op, Expr arg);
    static Expr apply(std::string op, Expr lhs, Expr rhs);

    /// Number of edges on the longest root-to-leaf path; a leaf has depth 0.
    int depth() const;

    friend bool operator==(const Expr &, const Expr &) = default;
};

/// An atomic formula `left = right` or `R(left, right)` with one variable
/// singled out. For a model and an element x, the invariant value is the
/// number of assignments of the other variables, with the base variable set
/// to x, that satisfy the formula.
struct RandomInvariant {
    /// Binary relation name; std::nullopt means equality.
    std::optional<std::string> relation;
    Expr left;
    Expr right;
    int base_variable = 0;
    int num_variables = 1;

    friend bool operator==(const RandomInvariant &, const RandomInvariant &) = default;
};

struct SelectionConfig {
    std::size_t pool_size = 50;
    std::size_t max_selected = 20;
    int max_depth = 4;
    int max_vars = 3;
    double sample_fraction = 0.002;
    std::size_t sample_min = 1000;
    std::uint64_t seed = 1;

    /// Throws FormulaError on inconsistent values.
    void validate() const;
};

using Rng = std::mt19937_64;

/// Builds a random formula: the predicate is equality or a binary relation,
/// each side is a random term whose leaves are forced at `max_depth`. Formulas
/// not mentioning x0 are regenerated. Variables other than x0 are renumbered
/// in order of first appearance so that `num_variables` counts only variables
/// that occur.
RandomInvariant generate_formula(const Signature &sig, const SelectionConfig &cfg, Rng &rng);

/// `cfg.pool_size` formulas drawn from one generator seeded with `cfg.seed`.
/// Empty when the signature has no unary or binary function.
std::vector<RandomInvariant> generate_pool(const Signature &sig, const SelectionConfig &cfg);

/// Throws FormulaError unless every function and relation the formula uses
/// exists in `sig` with the right kind and arity.
void check_formula(const RandomInvariant &inv, const Signature &sig);

/// Counting value for a single element.
InvariantValue evaluate(const RandomInvariant &inv, const Model &m, Element x);

/// Counting values for every element at once; entry x equals evaluate(inv, m, x).
std::vector<InvariantValue> evaluate_all(const RandomInvariant &inv, const Model &m);

/// Fully parenthesized form, e.g. `=(x0,+(*(x0,x1),'(x0)))`.
std::string to_string(const Expr &e);
std::string to_string(const RandomInvariant &inv);

/// Inverse of to_string. Names are resolved against `sig` to tell relations
/// from equality and to check arities.
RandomInvariant parse_formula(std::string_view text, const Signature &sig, int base_variable = 0);

/// Sum over blocks of |S| * (|S| - 1).
std::uint64_t score(std::span<const Block> blocks);
std::uint64_t score_of_sizes(std::span<const std::size_t> sizes);

/// How many of `total` input models the selection looks at:
/// max(sample_min, ceil(sample_fraction * total)), capped at total.
std::size_t sample_size(std::size_t total, const SelectionConfig &cfg);

struct Selection {
    std::vector<RandomInvariant> selected;
    /// Pool index of each selected formula, in adoption order.
    std::vector<std::size_t> pool_indices;
    /// Score of the basic invariants alone on the sample.
    std::uint64_t baseline_score = 0;
    /// Score after each adoption.
    std::vector<std::uint64_t> scores;
};

/// Greedy forward selection: starting from the basic invariants, repeatedly
/// adopt the pool formula whose addition gives the lowest score, as long as
/// it strictly beats the current score and fewer than `max_selected` are
/// adopted. Ties go to the lowest pool index.
Selection select_invariants(std::span<const RandomInvariant> pool, std::span<const Model> sample,
                            const SelectionConfig &cfg);

} // namespace isoblock
