#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace isoblock {

/// A domain element. Models use 0-based elements {0, ..., n-1}.
using Element = int;

/// A bijection on {0, ..., n-1}, stored as the image of each element.
using Permutation = std::vector<Element>;

class ModelError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class SymbolKind { function, relation };

struct Symbol {
    std::string name;
    SymbolKind kind = SymbolKind::function;
    int arity = 0;

    bool is_function(int k) const { return kind == SymbolKind::function && arity == k; }
    bool is_relation(int k) const { return kind == SymbolKind::relation && arity == k; }

    friend bool operator==(const Symbol &, const Symbol &) = default;
};

/// Ordered list of operation and relation symbols shared by every model of a run.
class Signature {
public:
    Signature() = default;
    explicit Signature(std::vector<Symbol> entries);

    std::span<const Symbol> entries() const { return entries_; }
    std::size_t size() const { return entries_.size(); }
    const Symbol &operator[](std::size_t i) const { return entries_[i]; }

    /// Index of the entry called `name`, if present.
    std::optional<std::size_t> find(std::string_view name) const;

    friend bool operator==(const Signature &, const Signature &) = default;

private:
    std::vector<Symbol> entries_;
};

using SignaturePtr = std::shared_ptr<const Signature>;

/// A finite interpretation: a domain size plus one flat table per
/// signature entry. A symbol of arity k owns n^k cells in row-major order,
/// so cell (x1, ..., xk) lives at sum(xi * n^(k-i)).
class Model {
public:
    /// Validates table lengths and value ranges; throws ModelError.
    Model(int order, SignaturePtr signature, std::vector<std::vector<int>> tables);

    int order() const { return order_; }
    const Signature &signature() const { return *signature_; }
    const SignaturePtr &signature_ptr() const { return signature_; }

    std::span<const int> table(std::size_t entry) const { return tables_[entry]; }

    int at(std::size_t entry) const { return tables_[entry][0]; }
    int at(std::size_t entry, Element x) const { return tables_[entry][x]; }
    int at(std::size_t entry, Element x, Element y) const
    {
        return tables_[entry][static_cast<std::size_t>(x) * order_ + y];
    }
    int at(std::size_t entry, Element x, Element y, Element z) const
    {
        return tables_[entry][(static_cast<std::size_t>(x) * order_ + y) * order_ + z];
    }

    /// Equal order, equal signature contents, equal tables.
    friend bool operator==(const Model &a, const Model &b);

private:
    int order_;
    SignaturePtr signature_;
    std::vector<std::vector<int>> tables_;
};

/// n^k as a table length.
std::size_t table_size(int order, int arity);

/// Throws ModelError unless `p` is a bijection on {0, ..., n-1}.
void check_permutation(std::span<const Element> p, int order);

Permutation identity_permutation(int order);
Permutation inverse(std::span<const Element> p);

/// (p o q)(x) = p(q(x)).
Permutation compose(std::span<const Element> p, std::span<const Element> q);

/// The isomorphic image of `m` under `p`: every function g satisfies
/// g'(p(x1), ..., p(xk)) = p(g(x1, ..., xk)) and every relation satisfies
/// R'(p(x1), ..., p(xk)) = R(x1, ..., xk).
Model apply_permutation(const Model &m, std::span<const Element> p);

} // namespace isoblock
