#include <random>

#include "doctest.h"
#include "helpers.hpp"
#include "pgf/errors.hpp"
#include "pgf/group.hpp"

using namespace pgf;
using namespace pgf::testing;

namespace {

// Hand-built model of the G_x groups: N = Z/p^2 x Z/p with g2 = (1,0),
// g3 = (0,1), g4 = (p x^-1, 0), extended by g1 acting as n -> n^{g1}.
struct GxModel {
    int p;
    int xinv;
    struct E {
        int k, a, b;
        bool operator==(const E&) const = default;
    };
    E phi(E n, int times) const {
        for (int t = 0; t < times; ++t) n = {n.k, (n.a + p * xinv * n.b) % (p * p), (n.a + n.b) % p};
        return n;
    }
    E mul(E u, E v) const {
        const E m = phi(u, v.k);
        return {(u.k + v.k) % p, (m.a + v.a) % (p * p), (m.b + v.b) % p};
    }
    E normal_form(const Exponents& e) const {
        E r{e[0], 0, 0};
        r = mul(r, {0, e[1], 0});
        r = mul(r, {0, 0, e[2]});
        r = mul(r, {0, (p * xinv * e[3]) % (p * p), 0});
        return r;
    }
};

int inverse_mod(int x, int p) {
    for (int y = 1; y < p; ++y)
        if (x * y % p == 1) return y;
    return 0;
}

}  // namespace

TEST_CASE("collection on the G_x groups matches an independent model") {
    for (int x : {1, 2}) {
        const int p = 5;
        const auto pres = theorem1(p, x);
        CHECK(pres.is_consistent());
        const GxModel model{p, inverse_mod(x, p)};
        const auto G = make_group(pres);
        std::vector<GxModel::E> image(G->order());
        for (Elem e = 0; e < G->order(); ++e) image[e] = model.normal_form(G->exponents(e));
        for (Elem a = 0; a < G->order(); ++a)
            for (Elem b = 0; b < G->order(); ++b) REQUIRE(image[G->mul(a, b)] == model.mul(image[a], image[b]));
    }
}

TEST_CASE("collect examples on G_1, p = 5") {
    const auto pres = theorem1(5, 1);
    const int g1g2[] = {1, 2};
    CHECK(pres.collect(g1g2) == Exponents{1, 1, 0, 0});
    // [g2, g1] = g3 with [a,b] = a^-1 b^-1 a b gives g2 g1 = g1 g2 g3.
    const int g2g1[] = {2, 1};
    CHECK(pres.collect(g2g1) == Exponents{1, 1, 1, 0});
    // g2^p reproduces the power relation g4^x.
    const int g2p[] = {2, 2, 2, 2, 2};
    CHECK(pres.collect(g2p) == pres.power(1));
    const int inv[] = {-2, 2};
    CHECK(pres.collect(inv) == pres.identity());
}

TEST_CASE("elementary abelian presentations are consistent") {
    for (int p : {2, 3, 5, 7})
        for (int n = 0; n <= 5; ++n) CHECK(PcPresentation(p, n).is_consistent());
}

TEST_CASE("shape violations are rejected when relations are set") {
    PcPresentation pres(5, 4);
    CHECK_THROWS_AS(pres.set_commutator(2, 0, unit(4, 2)), InvalidInput);  // [g3,g1] = g3
    CHECK_THROWS_AS(pres.set_power(1, unit(4, 1)), InvalidInput);
    CHECK_THROWS_AS(pres.set_commutator(0, 1, unit(4, 3)), InvalidInput);
    CHECK_THROWS_AS(pres.set_power(0, Exponents{0, 5, 0, 0}), InvalidInput);
    CHECK_THROWS_AS(PcPresentation(4, 2), InvalidInput);
}

TEST_CASE("inconsistent presentations are detected") {
    // g1^2 = g2 makes g2 a power of g1, so [g2, g1] = g3 cannot hold.
    PcPresentation pres(2, 3);
    pres.set_power(0, unit(3, 1));
    pres.set_commutator(1, 0, unit(3, 2));
    CHECK_FALSE(pres.is_consistent());
    CHECK_FALSE(regular_action_consistent(pres));
    CHECK_THROWS_AS(make_group(pres), InvalidInput);
}

TEST_CASE("overlap test agrees with the regular-action test on random presentations") {
    std::mt19937_64 rng(7);
    int consistent = 0;
    for (auto [p, n] : {std::pair{2, 4}, std::pair{2, 5}, std::pair{3, 3}, std::pair{3, 4}, std::pair{5, 3}}) {
        for (int trial = 0; trial < 150; ++trial) {
            auto pres = random_presentation(p, n, rng);
            // Thin out relations so that consistent cases are common.
            for (int i = 0; i < n; ++i)
                for (int j = i + 1; j < n; ++j)
                    if (rng() % 3) pres.set_commutator(j, i, pres.identity());
            const bool overlap = pres.is_consistent();
            CHECK(overlap == regular_action_consistent(pres));
            consistent += overlap;
        }
    }
    CHECK(consistent > 50);
}

TEST_CASE("collection is confluent on random words") {
    std::mt19937_64 rng(11);
    for (const auto& pres : {theorem1(5, 2), dihedral8(), quaternion8(), paper_family({Family::tuple2, 5, 2})}) {
        std::uniform_int_distribution<int> letter(1, pres.ngens());
        for (int trial = 0; trial < 1000; ++trial) {
            std::vector<int> u, v;
            for (int t = 0; t < 6; ++t) u.push_back(letter(rng) * (rng() % 4 ? 1 : -1));
            for (int t = 0; t < 6; ++t) v.push_back(letter(rng) * (rng() % 4 ? 1 : -1));
            auto uv = u;
            uv.insert(uv.end(), v.begin(), v.end());
            REQUIRE(pres.collect(uv) == pres.multiply(pres.collect(u), pres.collect(v)));
        }
    }
}

TEST_CASE("group tables are associative") {
    CHECK(table_associative(make_group(dihedral8())));
    CHECK(table_associative(make_group(quaternion8())));
    CHECK(table_associative(make_group(paper_family({Family::tuple2, 5, 4})), 200000));
    std::mt19937_64 rng(3);
    int checked = 0;
    while (checked < 20) {
        auto pres = random_presentation(3, 4, rng);
        if (!pres.is_consistent()) continue;
        CHECK(table_associative(make_group(pres)));
        ++checked;
    }
}

TEST_CASE("presentation text round trip and errors") {
    const auto pres = paper_family({Family::tuple3, 7, 3});
    const auto text = pres.to_string();
    CHECK(PcPresentation::parse(text) == pres);
    CHECK(PcPresentation::parse("2 3 | |") == PcPresentation(2, 3));
    CHECK(PcPresentation::parse("2 3 | pow 2: 0,0,1 | comm 2 1: 0,0,1") == dihedral8());
    CHECK_THROWS_AS(PcPresentation::parse("2 3 | pow 2: 0,0,1"), InvalidInput);
    CHECK_THROWS_AS(PcPresentation::parse("2 3 | pow 2: 0,1 | "), InvalidInput);
    CHECK_THROWS_AS(PcPresentation::parse("2 x | | "), InvalidInput);
    CHECK_THROWS_AS(PcPresentation::parse("2 3 | power 2: 0,0,1 | "), InvalidInput);
}
