#pragma once

// Shared fixtures for the test suites: small named algebras and random
// model/permutation generators.

#include <algorithm>
#include <numeric>
#include <random>
#include <vector>

#include "isoblock/model.hpp"

namespace isoblock::test {

inline SignaturePtr make_signature(std::vector<Symbol> symbols)
{
    return std::make_shared<const Signature>(std::move(symbols));
}

inline SignaturePtr star_signature()
{
    static const SignaturePtr sig = make_signature({{"*", SymbolKind::function, 2}});
    return sig;
}

/// Constant, unary, two binaries, a ternary, a unary and a binary relation.
inline SignaturePtr mixed_signature()
{
    static const SignaturePtr sig = make_signature({
        {"e", SymbolKind::function, 0},
        {"'", SymbolKind::function, 1},
        {"*", SymbolKind::function, 2},
        {"+", SymbolKind::function, 2},
        {"t", SymbolKind::function, 3},
        {"p", SymbolKind::relation, 1},
        {"<=", SymbolKind::relation, 2},
    });
    return sig;
}

inline Model binary_model(int n, std::vector<int> table)
{
    return Model(n, star_signature(), {std::move(table)});
}

template <typename Op>
Model binary_model_from(int n, Op op)
{
    std::vector<int> table;
    for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y)
            table.push_back(op(x, y));
    return binary_model(n, std::move(table));
}

inline Model z4() { return binary_model_from(4, [](int x, int y) { return (x + y) % 4; }); }
inline Model z2xz2() { return binary_model_from(4, [](int x, int y) { return x ^ y; }); }
inline Model left_zero(int n) { return binary_model_from(n, [](int x, int) { return x; }); }
inline Model right_zero(int n) { return binary_model_from(n, [](int, int y) { return y; }); }

using TestRng = std::mt19937_64;

inline Model random_model(TestRng &rng, const SignaturePtr &sig, int n)
{
    std::vector<std::vector<int>> tables;
    for (const Symbol &s : sig->entries()) {
        const int bound = s.kind == SymbolKind::function ? n : 2;
        std::uniform_int_distribution<int> value(0, bound - 1);
        std::vector<int> t(table_size(n, s.arity));
        for (int &v : t)
            v = value(rng);
        tables.push_back(std::move(t));
    }
    return Model(n, sig, std::move(tables));
}

inline Permutation random_permutation(TestRng &rng, int n)
{
    Permutation p(n);
    std::iota(p.begin(), p.end(), 0);
    std::shuffle(p.begin(), p.end(), rng);
    return p;
}

} // namespace isoblock::test
