#include <cmath>
#include <limits>

#include "isoblock/invariants.hpp"
#include "isoblock/partition.hpp"
#include "isoblock/random_invariants.hpp"

namespace isoblock {

std::uint64_t score_of_sizes(std::span<const std::size_t> sizes)
{
    std::uint64_t total = 0;
    for (std::size_t s : sizes)
        total += static_cast<std::uint64_t>(s) * (s > 0 ? s - 1 : 0);
    return total;
}

std::uint64_t score(std::span<const Block> blocks)
{
    std::uint64_t total = 0;
    for (const Block &b : blocks)
        total += static_cast<std::uint64_t>(b.size()) * (b.size() > 0 ? b.size() - 1 : 0);
    return total;
}

std::size_t sample_size(std::size_t total, const SelectionConfig &cfg)
{
    const double scaled = std::ceil(cfg.sample_fraction * static_cast<double>(total));
    const std::size_t fraction = static_cast<std::size_t>(scaled);
    return std::min(total, std::max(cfg.sample_min, fraction));
}

namespace {

// Per-model invariant data on the sample, so each trial only re-sorts rows.
struct SampleTable {
    std::vector<std::vector<InvariantVector>> basic;            // [model][element]
    std::vector<std::vector<std::vector<InvariantValue>>> pool; // [candidate][model][element]

    std::uint64_t score_with(std::span<const std::size_t> chosen) const
    {
        std::vector<ModelKey> keys;
        keys.reserve(basic.size());
        for (std::size_t m = 0; m < basic.size(); ++m) {
            std::vector<InvariantVector> rows = basic[m];
            for (std::size_t x = 0; x < rows.size(); ++x)
                for (std::size_t c : chosen)
                    rows[x].push_back(pool[c][m][x]);
            keys.push_back(make_key(std::move(rows)));
        }
        return score(group_by_key(keys));
    }
};

} // namespace

Selection select_invariants(std::span<const RandomInvariant> pool, std::span<const Model> sample,
                            const SelectionConfig &cfg)
{
    SampleTable table;
    table.basic.reserve(sample.size());
    for (const Model &m : sample)
        table.basic.push_back(element_vectors(m));

    Selection result;
    result.baseline_score = table.score_with({});
    if (pool.empty() || cfg.max_selected == 0)
        return result;

    table.pool.resize(pool.size());
    for (std::size_t c = 0; c < pool.size(); ++c) {
        table.pool[c].reserve(sample.size());
        for (const Model &m : sample)
            table.pool[c].push_back(evaluate_all(pool[c], m));
    }

    std::vector<bool> taken(pool.size(), false);
    std::vector<std::size_t> chosen;
    std::uint64_t best = result.baseline_score;
    // a score of zero cannot be beaten
    while (chosen.size() < cfg.max_selected && best > 0) {
        std::size_t adopt = pool.size();
        chosen.push_back(0);
        for (std::size_t c = 0; c < pool.size(); ++c) {
            if (taken[c])
                continue;
            chosen.back() = c;
            const std::uint64_t trial = table.score_with(chosen);
            if (trial < best) {
                best = trial;
                adopt = c;
            }
        }
        chosen.pop_back();
        if (adopt == pool.size())
            break;
        taken[adopt] = true;
        chosen.push_back(adopt);
        result.selected.push_back(pool[adopt]);
        result.pool_indices.push_back(adopt);
        result.scores.push_back(best);
    }
    return result;
}

} // namespace isoblock
