#include "isoblock/invariants.hpp"

namespace isoblock {

std::array<InvariantValue, 4> unary_invariants(const Model &m, std::size_t entry, Element x)
{
    const int n = m.order();
    const auto g = [&](Element y) { return m.at(entry, y); };

    std::array<InvariantValue, 4> out{};
    out[0] = g(x) == x;
    out[1] = g(x) != x && g(g(x)) == x;
    for (Element y = 0; y < n; ++y) {
        out[2] += g(y) == x;
        out[3] += g(g(y)) == x;
    }
    return out;
}

std::array<InvariantValue, 10> binary_invariants(const Model &m, std::size_t entry, Element x)
{
    const int n = m.order();
    const auto mul = [&](Element a, Element b) { return m.at(entry, a, b); };

    std::array<InvariantValue, 10> out{};

    // B1: walk x^1, x^2, ... until a power repeats.
    {
        std::vector<int> first_seen(n, 0);
        Element power = x;
        int t = 1;
        while (first_seen[power] == 0) {
            first_seen[power] = t;
            power = mul(power, x);
            ++t;
        }
        out[0] = static_cast<InvariantValue>(t);
    }

    std::vector<char> right_ideal(n, 0);
    std::vector<char> left_ideal(n, 0);
    const Element xx = mul(x, x);
    for (Element y = 0; y < n; ++y) {
        const Element xy = mul(x, y);
        const Element yy = mul(y, y);
        out[1] += mul(xy, x) == x;
        right_ideal[xy] = 1;
        left_ideal[mul(y, x)] = 1;
        out[5] += mul(x, yy) == mul(yy, x);
        out[6] += yy == x;
        out[7] += mul(x, xy) == mul(xx, y);
    }
    for (Element y = 0; y < n; ++y) {
        out[2] += right_ideal[y];
        out[3] += left_ideal[y];
    }
    out[4] = xx == x;

    std::vector<char> conjugate(n, 0);
    for (Element s = 0; s < n; ++s) {
        for (Element t = 0; t < n; ++t) {
            const Element st = mul(s, t);
            if (st != x)
                continue;
            const Element ts = mul(t, s);
            out[8] += ts == x;
            conjugate[ts] = 1;
        }
    }
    for (Element y = 0; y < n; ++y)
        out[9] += conjugate[y];
    return out;
}

std::array<InvariantValue, 4> relation_invariants(const Model &m, std::size_t entry, Element x)
{
    const int n = m.order();
    const auto r = [&](Element a, Element b) { return m.at(entry, a, b) != 0; };

    std::array<InvariantValue, 4> out{};
    for (Element y = 0; y < n; ++y) {
        out[0] += r(x, y);
        out[1] += r(y, x);
        out[3] += r(x, y) && r(y, x);
    }
    out[2] = r(x, x);
    return out;
}

InvariantValue ternary_invariant(const Model &m, std::size_t entry, Element x)
{
    InvariantValue count = 0;
    for (int v : m.table(entry))
        count += v == x;
    return count;
}

namespace {

std::size_t slots_for(const Symbol &sym)
{
    if (sym.kind == SymbolKind::relation)
        return sym.arity == 2 ? 4 : 0;
    switch (sym.arity) {
    case 1:
        return 4;
    case 2:
        return 10;
    case 3:
        return 1;
    default:
        return 0;
    }
}

void append_basic(const Model &m, Element x, InvariantVector &out)
{
    const Signature &sig = m.signature();
    for (std::size_t e = 0; e < sig.size(); ++e) {
        const Symbol &sym = sig[e];
        if (sym.is_function(1)) {
            const auto v = unary_invariants(m, e, x);
            out.insert(out.end(), v.begin(), v.end());
        } else if (sym.is_function(2)) {
            const auto v = binary_invariants(m, e, x);
            out.insert(out.end(), v.begin(), v.end());
        } else if (sym.is_function(3)) {
            out.push_back(ternary_invariant(m, e, x));
        } else if (sym.is_relation(2)) {
            const auto v = relation_invariants(m, e, x);
            out.insert(out.end(), v.begin(), v.end());
        }
    }
}

} // namespace

std::size_t basic_width(const Signature &sig)
{
    std::size_t width = 0;
    for (const Symbol &sym : sig.entries())
        width += slots_for(sym);
    return width;
}

std::vector<std::string> slot_names(const Signature &sig, std::size_t random_count)
{
    std::vector<std::string> names;
    for (const Symbol &sym : sig.entries()) {
        const char *prefix = sym.kind == SymbolKind::relation ? "R" : sym.arity == 1 ? "U" : sym.arity == 2 ? "B" : "T";
        for (std::size_t i = 1; i <= slots_for(sym); ++i)
            names.push_back(sym.name + "." + prefix + std::to_string(i));
    }
    for (std::size_t i = 1; i <= random_count; ++i)
        names.push_back("random." + std::to_string(i));
    return names;
}

InvariantVector element_vector(const Model &m, Element x, std::span<const RandomInvariant> extras)
{
    InvariantVector out;
    out.reserve(basic_width(m.signature()) + extras.size());
    append_basic(m, x, out);
    for (const RandomInvariant &inv : extras)
        out.push_back(evaluate(inv, m, x));
    return out;
}

std::vector<InvariantVector> element_vectors(const Model &m, std::span<const RandomInvariant> extras)
{
    const int n = m.order();
    const std::size_t width = basic_width(m.signature()) + extras.size();
    std::vector<InvariantVector> rows(n);
    for (Element x = 0; x < n; ++x) {
        rows[x].reserve(width);
        append_basic(m, x, rows[x]);
    }
    for (const RandomInvariant &inv : extras) {
        const auto column = evaluate_all(inv, m);
        for (Element x = 0; x < n; ++x)
            rows[x].push_back(column[x]);
    }
    return rows;
}

} // namespace isoblock
