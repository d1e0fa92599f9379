#include "isoblock/iso_filter.hpp"

#include <algorithm>
#include <numeric>

#include "isoblock/parallel.hpp"

namespace isoblock {

ElementClassing classify(const Model &m)
{
    ElementClassing c;
    c.vectors = element_vectors(m);
    const int n = m.order();

    std::vector<Element> by_vector(n);
    std::iota(by_vector.begin(), by_vector.end(), 0);
    std::stable_sort(by_vector.begin(), by_vector.end(),
                     [&](Element x, Element y) { return c.vectors[x] < c.vectors[y]; });

    c.class_of.assign(n, -1);
    for (std::size_t i = 0; i < by_vector.size(); ++i) {
        const Element x = by_vector[i];
        if (i == 0 || c.vectors[x] != c.vectors[by_vector[i - 1]])
            c.classes.emplace_back();
        c.class_of[x] = static_cast<int>(c.classes.size() - 1);
        c.classes.back().push_back(x);
    }
    for (auto &cls : c.classes)
        std::sort(cls.begin(), cls.end());
    return c;
}

namespace {

void require_same_signature(const Model &a, const Model &b)
{
    if (a.signature_ptr() != b.signature_ptr() && !(a.signature() == b.signature()))
        throw ModelError("cannot compare models with different signatures");
}

bool classes_correspond(const ElementClassing &ca, const ElementClassing &cb)
{
    if (ca.classes.size() != cb.classes.size())
        return false;
    for (std::size_t i = 0; i < ca.classes.size(); ++i) {
        if (ca.classes[i].size() != cb.classes[i].size())
            return false;
        if (ca.vectors[ca.classes[i].front()] != cb.vectors[cb.classes[i].front()])
            return false;
    }
    return true;
}

// Backtracking over images of a's elements. Besides checking every table
// cell whose coordinates are all mapped, a function cell whose value is not
// yet mapped forces that value's image.
class Matcher {
public:
    Matcher(const Model &a, const ElementClassing &ca, const Model &b, const ElementClassing &cb)
        : a_(a), b_(b), ca_(ca), cb_(cb), n_(a.order()), image_(n_, -1), preimage_(n_, -1), forced_(n_, -1),
          forced_src_(n_, -1)
    {
        order_.resize(n_);
        std::iota(order_.begin(), order_.end(), 0);
        std::stable_sort(order_.begin(), order_.end(), [&](Element x, Element y) {
            return ca_.classes[ca_.class_of[x]].size() < ca_.classes[ca_.class_of[y]].size();
        });
        assigned_.reserve(n_);
    }

    std::optional<Permutation> run()
    {
        const Signature &sig = a_.signature();
        for (std::size_t e = 0; e < sig.size(); ++e)
            if (sig[e].is_function(0) && !force(a_.at(e), b_.at(e)))
                return std::nullopt;
        if (!search())
            return std::nullopt;
        return Permutation(image_.begin(), image_.end());
    }

private:
    struct Undo {
        int *slot;
        int previous;
    };

    const Model &a_;
    const Model &b_;
    const ElementClassing &ca_;
    const ElementClassing &cb_;
    int n_;
    std::vector<int> image_;
    std::vector<int> preimage_;
    std::vector<int> forced_;
    std::vector<int> forced_src_;
    std::vector<Element> order_;
    std::vector<Element> assigned_;
    std::vector<Undo> trail_;

    void set(int &slot, int value)
    {
        trail_.push_back({&slot, slot});
        slot = value;
    }

    void rollback(std::size_t mark)
    {
        while (trail_.size() > mark) {
            *trail_.back().slot = trail_.back().previous;
            trail_.pop_back();
        }
    }

    // The image of v must be t.
    bool force(Element v, Element t)
    {
        if (image_[v] >= 0)
            return image_[v] == t;
        if (ca_.class_of[v] != cb_.class_of[t] || preimage_[t] >= 0)
            return false;
        if (forced_[v] >= 0)
            return forced_[v] == t;
        if (forced_src_[t] >= 0)
            return false;
        set(forced_[v], t);
        set(forced_src_[t], v);
        return true;
    }

    bool check_cells(Element x)
    {
        const Signature &sig = a_.signature();
        const Element y = image_[x];
        for (std::size_t e = 0; e < sig.size(); ++e) {
            const Symbol &sym = sig[e];
            const bool fn = sym.kind == SymbolKind::function;
            switch (sym.arity) {
            case 1:
                if (fn ? !force(a_.at(e, x), b_.at(e, y)) : a_.at(e, x) != b_.at(e, y))
                    return false;
                break;
            case 2:
                for (Element u : assigned_) {
                    const Element iu = image_[u];
                    if (fn) {
                        if (!force(a_.at(e, x, u), b_.at(e, y, iu)))
                            return false;
                        if (u != x && !force(a_.at(e, u, x), b_.at(e, iu, y)))
                            return false;
                    } else {
                        if (a_.at(e, x, u) != b_.at(e, y, iu))
                            return false;
                        if (u != x && a_.at(e, u, x) != b_.at(e, iu, y))
                            return false;
                    }
                }
                break;
            case 3:
                for (Element u : assigned_)
                    for (Element v : assigned_)
                        for (Element w : assigned_) {
                            if (u != x && v != x && w != x)
                                continue;
                            if (!force(a_.at(e, u, v, w), b_.at(e, image_[u], image_[v], image_[w])))
                                return false;
                        }
                break;
            default:
                break;
            }
        }
        return true;
    }

    bool assign(Element x, Element y)
    {
        if (preimage_[y] >= 0)
            return false;
        if (forced_[x] >= 0 && forced_[x] != y)
            return false;
        if (forced_src_[y] >= 0 && forced_src_[y] != x)
            return false;
        set(image_[x], y);
        set(preimage_[y], x);
        return check_cells(x);
    }

    Element next_element() const
    {
        Element fallback = -1;
        for (Element x : order_) {
            if (image_[x] >= 0)
                continue;
            if (forced_[x] >= 0)
                return x;
            if (fallback < 0)
                fallback = x;
        }
        return fallback;
    }

    bool search()
    {
        if (static_cast<int>(assigned_.size()) == n_)
            return true;
        const Element x = next_element();
        const Element only = forced_[x];
        const auto &candidates = cb_.classes[ca_.class_of[x]];
        for (Element y : candidates) {
            if (only >= 0 && y != only)
                continue;
            const std::size_t mark = trail_.size();
            assigned_.push_back(x);
            if (assign(x, y) && search())
                return true;
            assigned_.pop_back();
            rollback(mark);
        }
        return false;
    }
};

} // namespace

std::optional<Permutation> are_isomorphic(const Model &a, const ElementClassing &ca, const Model &b,
                                          const ElementClassing &cb)
{
    require_same_signature(a, b);
    if (a.order() != b.order() || !classes_correspond(ca, cb))
        return std::nullopt;
    return Matcher(a, ca, b, cb).run();
}

std::optional<Permutation> are_isomorphic(const Model &a, const Model &b)
{
    require_same_signature(a, b);
    if (a.order() != b.order())
        return std::nullopt;
    return are_isomorphic(a, classify(a), b, classify(b));
}

namespace {

bool maps_onto(const Model &a, const Model &b, const Permutation &p)
{
    const Signature &sig = a.signature();
    const int n = a.order();
    std::vector<int> coords;
    for (std::size_t e = 0; e < sig.size(); ++e) {
        const Symbol &sym = sig[e];
        const auto src = a.table(e);
        const auto dst = b.table(e);
        coords.assign(sym.arity, 0);
        for (std::size_t cell = 0; cell < src.size(); ++cell) {
            std::size_t image = 0;
            for (int c : coords)
                image = image * n + p[c];
            const int expected = sym.kind == SymbolKind::function ? p[src[cell]] : src[cell];
            if (dst[image] != expected)
                return false;
            for (int i = sym.arity - 1; i >= 0; --i) {
                if (++coords[i] < n)
                    break;
                coords[i] = 0;
            }
        }
    }
    return true;
}

} // namespace

bool oracle_isomorphic(const Model &a, const Model &b, int max_order)
{
    require_same_signature(a, b);
    if (a.order() != b.order())
        return false;
    if (a.order() > max_order)
        throw ModelError("oracle refuses order " + std::to_string(a.order()) + " (bound "
                         + std::to_string(max_order) + ")");
    Permutation p = identity_permutation(a.order());
    do {
        if (maps_onto(a, b, p))
            return true;
    } while (std::next_permutation(p.begin(), p.end()));
    return false;
}

FilterResult filter_block(std::span<const Model> models, const Block &block, bool explain)
{
    FilterResult result;
    for (std::size_t index : block.members) {
        const Model &candidate = models[index];
        bool duplicate = false;
        for (std::size_t rep : result.representatives) {
            ++result.isomorphism_tests;
            if (auto witness = are_isomorphic(models[rep], candidate)) {
                if (explain)
                    result.duplicates.push_back({index, rep, std::move(*witness)});
                duplicate = true;
                break;
            }
        }
        if (!duplicate)
            result.representatives.push_back(index);
    }
    return result;
}

std::vector<FilterResult> filter_blocks(std::span<const Model> models, std::span<const Block> blocks, unsigned jobs,
                                        bool explain)
{
    std::vector<std::size_t> schedule(blocks.size());
    std::iota(schedule.begin(), schedule.end(), 0);
    std::stable_sort(schedule.begin(), schedule.end(),
                     [&](std::size_t i, std::size_t j) { return blocks[i].size() > blocks[j].size(); });

    std::vector<FilterResult> results(blocks.size());
    parallel_for(schedule.size(), jobs, [&](std::size_t k) {
        const std::size_t b = schedule[k];
        results[b] = filter_block(models, blocks[b], explain);
    });
    return results;
}

} // namespace isoblock
