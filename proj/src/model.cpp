#include "isoblock/model.hpp"

#include <algorithm>

namespace isoblock {

Signature::Signature(std::vector<Symbol> entries) : entries_(std::move(entries))
{
    for (std::size_t i = 0; i < entries_.size(); ++i) {
        if (entries_[i].arity < 0)
            throw ModelError("symbol '" + entries_[i].name + "' has negative arity");
        for (std::size_t j = 0; j < i; ++j)
            if (entries_[j].name == entries_[i].name)
                throw ModelError("duplicate symbol '" + entries_[i].name + "' in signature");
    }
}

std::optional<std::size_t> Signature::find(std::string_view name) const
{
    for (std::size_t i = 0; i < entries_.size(); ++i)
        if (entries_[i].name == name)
            return i;
    return std::nullopt;
}

std::size_t table_size(int order, int arity)
{
    std::size_t size = 1;
    for (int i = 0; i < arity; ++i)
        size *= static_cast<std::size_t>(order);
    return size;
}

Model::Model(int order, SignaturePtr signature, std::vector<std::vector<int>> tables)
    : order_(order), signature_(std::move(signature)), tables_(std::move(tables))
{
    if (order_ < 1)
        throw ModelError("model order must be at least 1");
    if (!signature_)
        throw ModelError("model has no signature");
    if (tables_.size() != signature_->size())
        throw ModelError("model has " + std::to_string(tables_.size()) + " tables but signature has "
                         + std::to_string(signature_->size()) + " entries");

    for (std::size_t e = 0; e < tables_.size(); ++e) {
        const Symbol &sym = (*signature_)[e];
        const std::size_t expected = table_size(order_, sym.arity);
        if (tables_[e].size() != expected)
            throw ModelError("table for '" + sym.name + "' has " + std::to_string(tables_[e].size())
                             + " values, expected " + std::to_string(expected));
        const int bound = sym.kind == SymbolKind::function ? order_ : 2;
        for (int v : tables_[e])
            if (v < 0 || v >= bound)
                throw ModelError("value " + std::to_string(v) + " out of range in table for '" + sym.name + "'");
    }
}

bool operator==(const Model &a, const Model &b)
{
    return a.order_ == b.order_ && (a.signature_ == b.signature_ || *a.signature_ == *b.signature_)
        && a.tables_ == b.tables_;
}

void check_permutation(std::span<const Element> p, int order)
{
    if (p.size() != static_cast<std::size_t>(order))
        throw ModelError("permutation has length " + std::to_string(p.size()) + ", expected "
                         + std::to_string(order));
    std::vector<bool> seen(p.size(), false);
    for (Element x : p) {
        if (x < 0 || x >= order || seen[x])
            throw ModelError("permutation is not a bijection on the domain");
        seen[x] = true;
    }
}

Permutation identity_permutation(int order)
{
    Permutation p(order);
    for (int i = 0; i < order; ++i)
        p[i] = i;
    return p;
}

Permutation inverse(std::span<const Element> p)
{
    Permutation inv(p.size());
    for (std::size_t i = 0; i < p.size(); ++i)
        inv[p[i]] = static_cast<Element>(i);
    return inv;
}

Permutation compose(std::span<const Element> p, std::span<const Element> q)
{
    Permutation r(q.size());
    for (std::size_t i = 0; i < q.size(); ++i)
        r[i] = p[q[i]];
    return r;
}

Model apply_permutation(const Model &m, std::span<const Element> p)
{
    const int n = m.order();
    check_permutation(p, n);

    const Signature &sig = m.signature();
    std::vector<std::vector<int>> tables(sig.size());
    std::vector<int> coords;
    for (std::size_t e = 0; e < sig.size(); ++e) {
        const Symbol &sym = sig[e];
        const auto src = m.table(e);
        auto &dst = tables[e];
        dst.assign(src.size(), 0);
        coords.assign(sym.arity, 0);
        for (std::size_t cell = 0; cell < src.size(); ++cell) {
            std::size_t image = 0;
            for (int i = 0; i < sym.arity; ++i)
                image = image * n + p[coords[i]];
            dst[image] = sym.kind == SymbolKind::function ? p[src[cell]] : src[cell];

            // advance the row-major odometer
            for (int i = sym.arity - 1; i >= 0; --i) {
                if (++coords[i] < n)
                    break;
                coords[i] = 0;
            }
        }
    }
    return Model(n, m.signature_ptr(), std::move(tables));
}

} // namespace isoblock
