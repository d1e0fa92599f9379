#include "isoblock/corpus.hpp"

#include <array>

namespace isoblock {

namespace {

struct AxiomInfo {
    AxiomSet axioms;
    std::string_view name;
    int max_order;
    bool associative;
    bool commutative;
    bool latin;
    bool idempotent;
};

constexpr std::array<AxiomInfo, 6> axiom_table{{
    {AxiomSet::magma, "magma", 3, false, false, false, false},
    {AxiomSet::semigroup, "semigroup", 3, true, false, false, false},
    {AxiomSet::commutative_magma, "commutative-magma", 3, false, true, false, false},
    {AxiomSet::quasigroup, "quasigroup", 5, false, false, true, false},
    {AxiomSet::band, "band", 3, true, false, false, true},
    {AxiomSet::commutative_semigroup, "commutative-semigroup", 3, true, true, false, false},
}};

const AxiomInfo &info(AxiomSet axioms)
{
    for (const AxiomInfo &i : axiom_table)
        if (i.axioms == axioms)
            return i;
    throw ModelError("unknown axiom set");
}

class Enumerator {
public:
    Enumerator(const AxiomInfo &ax, int n) : ax_(ax), n_(n), table_(static_cast<std::size_t>(n) * n, -1)
    {
        if (ax_.latin) {
            row_used_.assign(table_.size(), 0);
            col_used_.assign(table_.size(), 0);
        }
    }

    std::vector<Model> run()
    {
        signature_ = binary_signature();
        fill(0);
        return std::move(out_);
    }

private:
    const AxiomInfo &ax_;
    int n_;
    std::vector<int> table_;
    std::vector<char> row_used_;
    std::vector<char> col_used_;
    SignaturePtr signature_;
    std::vector<Model> out_;

    int at(int x, int y) const { return table_[x * n_ + y]; }

    // Every triple whose four products are already filled must associate.
    bool associative_so_far() const
    {
        for (int x = 0; x < n_; ++x)
            for (int y = 0; y < n_; ++y) {
                const int xy = at(x, y);
                if (xy < 0)
                    continue;
                for (int z = 0; z < n_; ++z) {
                    const int yz = at(y, z);
                    if (yz < 0)
                        continue;
                    const int lhs = at(xy, z);
                    const int rhs = at(x, yz);
                    if (lhs >= 0 && rhs >= 0 && lhs != rhs)
                        return false;
                }
            }
        return true;
    }

    void fill(int cell)
    {
        if (cell == n_ * n_) {
            out_.emplace_back(n_, signature_, std::vector<std::vector<int>>{table_});
            return;
        }
        const int x = cell / n_;
        const int y = cell % n_;

        int lo = 0;
        int hi = n_ - 1;
        if (ax_.idempotent && x == y)
            lo = hi = x;
        if (ax_.commutative && y < x)
            lo = hi = at(y, x);

        for (int v = lo; v <= hi; ++v) {
            if (ax_.latin && (row_used_[x * n_ + v] || col_used_[y * n_ + v]))
                continue;
            table_[cell] = v;
            if (ax_.latin) {
                row_used_[x * n_ + v] = 1;
                col_used_[y * n_ + v] = 1;
            }
            if (!ax_.associative || associative_so_far())
                fill(cell + 1);
            if (ax_.latin) {
                row_used_[x * n_ + v] = 0;
                col_used_[y * n_ + v] = 0;
            }
        }
        table_[cell] = -1;
    }
};

} // namespace

std::optional<AxiomSet> parse_axiom_set(std::string_view name)
{
    for (const AxiomInfo &i : axiom_table)
        if (i.name == name)
            return i.axioms;
    return std::nullopt;
}

std::string_view to_string(AxiomSet axioms)
{
    return info(axioms).name;
}

int default_max_order(AxiomSet axioms)
{
    return info(axioms).max_order;
}

SignaturePtr binary_signature()
{
    static const SignaturePtr sig =
        std::make_shared<const Signature>(std::vector<Symbol>{{"*", SymbolKind::function, 2}});
    return sig;
}

bool satisfies(AxiomSet axioms, const Model &m)
{
    const AxiomInfo &ax = info(axioms);
    if (m.signature().size() != 1 || !m.signature()[0].is_function(2))
        return false;
    const int n = m.order();
    const auto mul = [&](int x, int y) { return m.at(0, x, y); };

    for (int x = 0; x < n; ++x) {
        if (ax.idempotent && mul(x, x) != x)
            return false;
        for (int y = 0; y < n; ++y) {
            if (ax.commutative && mul(x, y) != mul(y, x))
                return false;
            if (ax.associative)
                for (int z = 0; z < n; ++z)
                    if (mul(mul(x, y), z) != mul(x, mul(y, z)))
                        return false;
        }
    }
    if (ax.latin) {
        for (int x = 0; x < n; ++x) {
            std::vector<char> row(n, 0);
            std::vector<char> col(n, 0);
            for (int y = 0; y < n; ++y) {
                if (row[mul(x, y)]++ || col[mul(y, x)]++)
                    return false;
            }
        }
    }
    return true;
}

std::vector<Model> enumerate_models(AxiomSet axioms, int order, std::optional<int> max_order)
{
    const AxiomInfo &ax = info(axioms);
    const int bound = max_order.value_or(ax.max_order);
    if (order < 1)
        throw ModelError("order must be at least 1");
    if (order > bound)
        throw ModelError(std::string(ax.name) + " enumeration is limited to order " + std::to_string(bound));
    return Enumerator(ax, order).run();
}

} // namespace isoblock
