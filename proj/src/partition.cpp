#include "isoblock/partition.hpp"

#include <algorithm>
#include <unordered_map>

#include "isoblock/parallel.hpp"

namespace isoblock {

namespace {

void put_u32(std::string &out, std::uint32_t v)
{
    out.push_back(static_cast<char>((v >> 24) & 0xff));
    out.push_back(static_cast<char>((v >> 16) & 0xff));
    out.push_back(static_cast<char>((v >> 8) & 0xff));
    out.push_back(static_cast<char>(v & 0xff));
}

} // namespace

ModelKey make_key(std::vector<InvariantVector> rows)
{
    std::sort(rows.begin(), rows.end());
    const std::size_t width = rows.empty() ? 0 : rows.front().size();

    std::string bytes;
    bytes.reserve(8 + 4 * rows.size() * width);
    put_u32(bytes, static_cast<std::uint32_t>(rows.size()));
    put_u32(bytes, static_cast<std::uint32_t>(width));
    for (const InvariantVector &row : rows) {
        if (row.size() != width)
            throw ModelError("invariant vectors of one model differ in length");
        for (InvariantValue v : row)
            put_u32(bytes, v);
    }
    return ModelKey(std::move(bytes));
}

ModelKey model_key(const Model &m, std::span<const RandomInvariant> extras)
{
    return make_key(element_vectors(m, extras));
}

std::vector<Block> group_by_key(std::span<const ModelKey> keys)
{
    std::vector<Block> blocks;
    // unordered_map compares full keys on every hash hit, so colliding
    // hashes never merge blocks.
    std::unordered_map<ModelKey, std::size_t, ModelKeyHash> index;
    index.reserve(keys.size());
    for (std::size_t i = 0; i < keys.size(); ++i) {
        auto [it, inserted] = index.try_emplace(keys[i], blocks.size());
        if (inserted)
            blocks.push_back(Block{keys[i], {}});
        blocks[it->second].members.push_back(i);
    }
    return blocks;
}

std::vector<Block> partition(std::span<const Model> models, std::span<const RandomInvariant> extras, unsigned jobs)
{
    if (models.empty())
        return {};
    const Signature &sig = models.front().signature();
    for (const Model &m : models)
        if (m.signature_ptr() != models.front().signature_ptr() && !(m.signature() == sig))
            throw ModelError("models do not share one signature");
    for (const RandomInvariant &inv : extras)
        check_formula(inv, sig);

    std::vector<ModelKey> keys(models.size());
    parallel_for(models.size(), jobs, [&](std::size_t i) { keys[i] = model_key(models[i], extras); });
    return group_by_key(keys);
}

} // namespace isoblock
