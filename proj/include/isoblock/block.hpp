#pragma once

#include <compare>
#include <cstddef>
#include <string>
#include <vector>

namespace isoblock {

/// Canonical byte key of a model: its per-element invariant vectors sorted
/// lexicographically and serialized as fixed-width big-endian integers.
class ModelKey {
public:
    ModelKey() = default;
    explicit ModelKey(std::string bytes) : bytes_(std::move(bytes)) {}

    const std::string &bytes() const { return bytes_; }

    friend bool operator==(const ModelKey &, const ModelKey &) = default;
    friend auto operator<=>(const ModelKey &, const ModelKey &) = default;

private:
    std::string bytes_;
};

struct ModelKeyHash {
    std::size_t operator()(const ModelKey &key) const noexcept { return std::hash<std::string>{}(key.bytes()); }
};

/// Models sharing one key, as indices into the input list in input order.
struct Block {
    ModelKey key;
    std::vector<std::size_t> members;

    std::size_t size() const { return members.size(); }
};

} // namespace isoblock
