#include "doctest.h"

#include "isoblock/corpus.hpp"
#include "isoblock/iso_filter.hpp"
#include "isoblock/partition.hpp"
#include "support.hpp"

using namespace isoblock;
using namespace isoblock::test;

namespace {

Block all_of(std::size_t count)
{
    Block b;
    for (std::size_t i = 0; i < count; ++i)
        b.members.push_back(i);
    return b;
}

// Random model together with a random relabelling or an unrelated model.
std::pair<Model, Model> random_pair(TestRng &rng, const SignaturePtr &sig, int n, bool related)
{
    Model a = random_model(rng, sig, n);
    Model b = related ? apply_permutation(a, random_permutation(rng, n)) : random_model(rng, sig, n);
    return {std::move(a), std::move(b)};
}

void check_filter_against_oracle(const std::vector<Model> &models)
{
    const auto blocks = partition(models);
    const auto results = filter_blocks(models, blocks, 1);
    std::vector<std::size_t> reps;
    for (const FilterResult &r : results)
        reps.insert(reps.end(), r.representatives.begin(), r.representatives.end());
    for (std::size_t i = 0; i < reps.size(); ++i)
        for (std::size_t j = i + 1; j < reps.size(); ++j)
            CHECK_FALSE(oracle_isomorphic(models[reps[i]], models[reps[j]]));
    for (std::size_t i = 0; i < models.size(); ++i) {
        bool covered = false;
        for (std::size_t r : reps)
            covered = covered || oracle_isomorphic(models[i], models[r]);
        CHECK(covered);
    }
}

} // namespace

TEST_CASE("witness is a valid isomorphism")
{
    TestRng rng(1);
    for (int round = 0; round < 500; ++round) {
        const int n = 1 + round % 6;
        const Model a = random_model(rng, mixed_signature(), n);
        const Model b = apply_permutation(a, random_permutation(rng, n));
        const auto w = are_isomorphic(a, b);
        REQUIRE(w.has_value());
        CHECK(apply_permutation(a, *w) == b);
    }
}

TEST_CASE("named non-isomorphic pairs")
{
    CHECK_FALSE(are_isomorphic(z4(), z2xz2()).has_value());
    CHECK_FALSE(oracle_isomorphic(z4(), z2xz2()));
    CHECK_FALSE(are_isomorphic(left_zero(3), right_zero(3)).has_value());
    CHECK_FALSE(oracle_isomorphic(left_zero(3), right_zero(3)));
    CHECK_FALSE(are_isomorphic(z4(), left_zero(3)).has_value());
    TestRng rng(1);
    CHECK_THROWS_AS(are_isomorphic(z4(), random_model(rng, mixed_signature(), 4)), ModelError);
}

TEST_CASE("filter_block examples")
{
    TestRng rng(3);
    SUBCASE("permuted copies keep the first")
    {
        const Model base = random_model(rng, star_signature(), 5);
        std::vector<Model> copies{base};
        for (int k = 0; k < 7; ++k)
            copies.push_back(apply_permutation(base, random_permutation(rng, 5)));
        const FilterResult r = filter_block(copies, all_of(copies.size()), true);
        CHECK(r.representatives == std::vector<std::size_t>{0});
        REQUIRE(r.duplicates.size() == 7);
        for (const Duplicate &d : r.duplicates) {
            CHECK(d.representative == 0);
            CHECK(apply_permutation(copies[0], d.witness) == copies[d.model]);
        }
    }
    SUBCASE("singleton block runs no tests")
    {
        const std::vector<Model> one{z4()};
        const FilterResult r = filter_block(one, all_of(1));
        CHECK(r.representatives == std::vector<std::size_t>{0});
        CHECK(r.isomorphism_tests == 0);
    }
    SUBCASE("Z4, Z2xZ2 and a relabelled Z4")
    {
        const std::vector<Model> models{z4(), z2xz2(), apply_permutation(z4(), Permutation{2, 0, 3, 1})};
        const FilterResult r = filter_block(models, all_of(3));
        CHECK(r.representatives == std::vector<std::size_t>{0, 1});
        CHECK(r.duplicates.empty());
    }
    SUBCASE("block lists a subset of the models")
    {
        const std::vector<Model> models{z4(), z2xz2(), left_zero(4), apply_permutation(z2xz2(), Permutation{1, 0, 2, 3})};
        Block b;
        b.members = {1, 3};
        CHECK(filter_block(models, b).representatives == std::vector<std::size_t>{1});
    }
}

TEST_CASE("oracle laws")
{
    TestRng rng(4);
    for (int round = 0; round < 200; ++round) {
        const int n = 1 + round % 4;
        auto [a, b] = random_pair(rng, star_signature(), n, round % 2 == 0);
        CHECK(oracle_isomorphic(a, a));
        CHECK(oracle_isomorphic(a, b) == oracle_isomorphic(b, a));
        if (round % 2 == 0)
            CHECK(oracle_isomorphic(a, b));
    }
    CHECK_FALSE(oracle_isomorphic(left_zero(2), left_zero(3)));
    CHECK_THROWS_AS(oracle_isomorphic(left_zero(8), left_zero(8)), ModelError);
    CHECK(oracle_isomorphic(left_zero(8), left_zero(8), 8));
}

TEST_CASE("search agrees with the oracle")
{
    TestRng rng(5);
    const auto sparse = make_signature({{"*", SymbolKind::function, 2}, {"r", SymbolKind::relation, 2}});
    int disagreements = 0;
    for (int round = 0; round < 3000; ++round) {
        const int n = 1 + round % 5;
        const SignaturePtr sig = round % 3 == 0 ? mixed_signature() : (round % 3 == 1 ? star_signature() : sparse);
        auto [a, b] = random_pair(rng, sig, n, round % 2 == 0);
        const auto w = are_isomorphic(a, b);
        if (w.has_value() != oracle_isomorphic(a, b))
            ++disagreements;
        if (w)
            CHECK(apply_permutation(a, *w) == b);
    }
    CHECK(disagreements == 0);
}

TEST_CASE("search agrees with the oracle inside blocks of small corpora")
{
    // Same-key pairs are the hard cases: the invariants cannot tell them apart.
    for (AxiomSet ax : {AxiomSet::magma, AxiomSet::commutative_magma}) {
        const auto models = enumerate_models(ax, ax == AxiomSet::magma ? 2 : 3);
        for (const Block &b : partition(models))
            for (std::size_t i = 0; i < b.members.size(); ++i)
                for (std::size_t j = i + 1; j < b.members.size() && j < i + 8; ++j) {
                    const Model &x = models[b.members[i]];
                    const Model &y = models[b.members[j]];
                    CHECK(are_isomorphic(x, y).has_value() == oracle_isomorphic(x, y));
                }
    }
}

TEST_CASE("relations are matched exactly")
{
    const auto sig = make_signature({{"r", SymbolKind::relation, 2}});
    // a chain 0 < 1 < 2 and its reverse are isomorphic; a chain and a V are not
    const Model chain(3, sig, {{0, 1, 0, 0, 0, 1, 0, 0, 0}});
    const Model reverse(3, sig, {{0, 0, 0, 1, 0, 0, 0, 1, 0}});
    const Model vee(3, sig, {{0, 1, 1, 0, 0, 0, 0, 0, 0}});
    const auto w = are_isomorphic(chain, reverse);
    REQUIRE(w.has_value());
    CHECK(apply_permutation(chain, *w) == reverse);
    CHECK_FALSE(are_isomorphic(chain, vee).has_value());

    // a relation that is a superset of another: not isomorphic
    const Model more(3, sig, {{0, 1, 1, 0, 0, 1, 0, 0, 0}});
    CHECK_FALSE(are_isomorphic(chain, more).has_value());
    CHECK_FALSE(are_isomorphic(more, chain).has_value());
}

TEST_CASE("constants must correspond")
{
    const auto sig = make_signature({{"e", SymbolKind::function, 0}, {"*", SymbolKind::function, 2}});
    const std::vector<int> xor_table{0, 1, 1, 0};
    const Model e0(2, sig, {{0}, xor_table});
    const Model e1(2, sig, {{1}, xor_table});
    CHECK_FALSE(are_isomorphic(e0, e1).has_value());
    CHECK_FALSE(oracle_isomorphic(e0, e1));
    CHECK(are_isomorphic(e0, e0).has_value());
}

TEST_CASE("transitivity within blocks")
{
    const auto models = enumerate_models(AxiomSet::semigroup, 3);
    for (const Block &b : partition(models)) {
        const auto &m = b.members;
        for (std::size_t i = 0; i + 2 < m.size(); ++i) {
            const auto ab = are_isomorphic(models[m[i]], models[m[i + 1]]);
            const auto bc = are_isomorphic(models[m[i + 1]], models[m[i + 2]]);
            if (ab && bc) {
                const auto ac = are_isomorphic(models[m[i]], models[m[i + 2]]);
                REQUIRE(ac.has_value());
                CHECK(apply_permutation(models[m[i]], compose(*bc, *ab)) == models[m[i + 2]]);
            }
        }
    }
}

TEST_CASE("filtering conserves isomorphism classes")
{
    check_filter_against_oracle(enumerate_models(AxiomSet::semigroup, 3));
    check_filter_against_oracle(enumerate_models(AxiomSet::band, 3));
    check_filter_against_oracle(enumerate_models(AxiomSet::magma, 2));
}

TEST_CASE("filter_blocks is independent of the job count")
{
    const auto models = enumerate_models(AxiomSet::quasigroup, 4);
    const auto blocks = partition(models);
    const auto one = filter_blocks(models, blocks, 1, true);
    const auto many = filter_blocks(models, blocks, 8, true);
    REQUIRE(one.size() == many.size());
    std::size_t reps = 0;
    for (std::size_t b = 0; b < one.size(); ++b) {
        CHECK(one[b].representatives == many[b].representatives);
        CHECK(one[b].isomorphism_tests == many[b].isomorphism_tests);
        REQUIRE(one[b].duplicates.size() == many[b].duplicates.size());
        for (std::size_t d = 0; d < one[b].duplicates.size(); ++d)
            CHECK(one[b].duplicates[d].witness == many[b].duplicates[d].witness);
        reps += one[b].representatives.size();
    }
    CHECK(reps == 35);
}
