#include <algorithm>
#include <random>

#include "doctest.h"
#include "helpers.hpp"
#include "pgf/chartab.hpp"
#include "pgf/errors.hpp"

using namespace pgf;
using namespace pgf::testing;

namespace {

CyclotomicValue zeta(std::uint32_t m, std::uint32_t k) {
    std::vector<long long> a(m, 0);
    a[k % m] = 1;
    return CyclotomicValue::from_exponent_counts(m, a);
}

// Inner product <f, g> times |G|, exact.
CyclotomicValue inner_times_order(const CharacterTable& t, const std::vector<CyclotomicValue>& f,
                                  const std::vector<CyclotomicValue>& g) {
    auto acc = CyclotomicValue::integer(t.exponent, 0);
    for (std::size_t c = 0; c < t.classes.size(); ++c)
        acc = acc + CyclotomicValue::integer(t.exponent, t.classes[c].size) * f[c] * g[c].conjugate();
    return acc;
}

// Order of the derived subgroup from the table: closure of all commutators.
std::size_t derived_order(const GroupPtr& G) {
    std::set<Elem> s{0};
    std::vector<Elem> queue{0};
    std::vector<Elem> comms;
    for (Elem a = 0; a < G->order(); ++a)
        for (Elem b = 0; b < G->order(); ++b) comms.push_back(G->comm(a, b));
    std::sort(comms.begin(), comms.end());
    comms.erase(std::unique(comms.begin(), comms.end()), comms.end());
    for (std::size_t h = 0; h < queue.size(); ++h)
        for (Elem c : comms)
            if (s.insert(G->mul(queue[h], c)).second) queue.push_back(G->mul(queue[h], c));
    return s.size();
}

}  // namespace

TEST_CASE("cyclotomic arithmetic") {
    CHECK(zeta(4, 1) * zeta(4, 1) == CyclotomicValue::integer(4, -1));
    CHECK(zeta(3, 0) + zeta(3, 1) + zeta(3, 2) == CyclotomicValue::integer(3, 0));
    CHECK(zeta(8, 3).conjugate() == zeta(8, 5));
    CHECK(zeta(9, 2) * zeta(9, 2).conjugate() == CyclotomicValue::integer(9, 1));
    // the reduced basis has phi(m) entries
    for (std::uint32_t k = 0; k < 25; ++k) {
        const auto z = zeta(25, k);
        CHECK(std::all_of(z.coefficients.begin() + 20, z.coefficients.end(), [](long long c) { return c == 0; }));
        CHECK(CyclotomicValue::parse(25, z.to_string()) == z);
    }
    CHECK(CyclotomicValue::integer(5, 0).to_string() == "0");
    CHECK(zeta(4, 3).to_string() == "0,-1");
    CHECK_THROWS_AS(CyclotomicValue::parse(4, "0,0,1"), InvalidInput);
    CHECK_THROWS_AS(CyclotomicValue::parse(4, "1,x"), InvalidInput);
    CHECK_THROWS_AS(CyclotomicValue::parse(2, "1,2,3"), InvalidInput);
}

TEST_CASE("power maps agree with direct powering") {
    for (const auto& e : enumerate_groups(2, 4)) {
        const auto G = make_group(e.presentation);
        for (long long n : {2, 3, 5, 7}) {
            const auto pm = power_map(G, n);
            for (Elem x = 0; x < G->order(); ++x) {
                Elem y = 0;
                for (long long k = 0; k < n; ++k) y = G->mul(y, x);
                CHECK(pm[G->class_of(x)] == G->class_of(y));
            }
            if (n % 2) {
                auto sorted = pm;
                std::sort(sorted.begin(), sorted.end());
                CHECK(std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end());
            }
        }
    }
}

TEST_CASE("D8 and Q8 tables") {
    const auto d8 = character_table(make_group(dihedral8()));
    const auto q8 = character_table(make_group(quaternion8()));
    for (const auto* t : {&d8, &q8}) {
        CHECK(t->verify());
        CHECK(t->degrees() == std::vector<long long>{1, 1, 1, 1, 2});
        for (const auto& row : t->irreducibles)
            for (const auto& v : row) CHECK(v.is_integer());
        CHECK(std::all_of(t->irreducibles[0].begin(), t->irreducibles[0].end(),
                          [](const auto& v) { return v == CyclotomicValue::integer(4, 1); }));
    }
    const auto m = char_tables_equivalent(d8, q8);
    REQUIRE(m);
    CHECK(verify_matching(d8, q8, *m, false));
    CHECK_FALSE(brauer_pair(d8, q8));
    const auto self = brauer_pair(d8, d8);
    REQUIRE(self);
    CHECK(verify_matching(d8, d8, *self, true));
}

TEST_CASE("orthogonality and degrees for all groups up to order 32 and 3^4") {
    for (auto [p, n] : {std::pair{2, 3}, std::pair{2, 4}, std::pair{2, 5}, std::pair{3, 3}, std::pair{3, 4}}) {
        for (const auto& e : enumerate_groups(p, n)) {
            const auto G = make_group(e.presentation);
            const auto t = character_table(G);
            CHECK(t.verify());
            const auto deg = t.degrees();
            CHECK(std::count(deg.begin(), deg.end(), 1) == static_cast<long>(G->order() / derived_order(G)));
            for (auto d : deg) CHECK(G->order() % d == 0);
            CHECK(t.classes == G->classes());
        }
    }
}

TEST_CASE("tensor products decompose with non-negative integer multiplicities") {
    for (const auto& pres : {heisenberg(3), extraspecial_exp_p2(3), quaternion8(), theorem1(5, 1)}) {
        const auto G = make_group(pres);
        const auto t = character_table(G);
        const std::size_t r = t.classes.size();
        for (std::size_t i = 0; i < std::min<std::size_t>(r, 6); ++i)
            for (std::size_t j = r - 3; j < r; ++j) {
                std::vector<CyclotomicValue> prod;
                for (std::size_t c = 0; c < r; ++c) prod.push_back(t.irreducibles[i][c] * t.irreducibles[j][c]);
                long long total = 0;
                for (std::size_t k = 0; k < r; ++k) {
                    const auto ip = inner_times_order(t, prod, t.irreducibles[k]);
                    REQUIRE(ip.is_integer());
                    CHECK(ip.coefficients[0] % G->order() == 0);
                    CHECK(ip.coefficients[0] >= 0);
                    total += ip.coefficients[0] / G->order() * t.degrees()[k];
                }
                CHECK(total == t.degrees()[i] * t.degrees()[j]);
            }
    }
}

TEST_CASE("extraspecial 3^3 has two faithful characters of degree 3") {
    const auto G = make_group(heisenberg(3));
    const auto t = character_table(G);
    const auto deg = t.degrees();
    CHECK(std::count(deg.begin(), deg.end(), 1) == 9);
    CHECK(std::count(deg.begin(), deg.end(), 3) == 2);
    // on a central element of order 3 the faithful characters take 3 zeta and 3 zeta^2
    std::size_t z = 0;
    for (std::size_t c = 0; c < t.classes.size(); ++c)
        if (t.classes[c].size == 1 && t.classes[c].element_order == 3) z = c;
    REQUIRE(z != 0);
    const auto three = CyclotomicValue::integer(3, 3);
    std::vector<CyclotomicValue> vals{t.irreducibles[9][z], t.irreducibles[10][z]};
    std::sort(vals.begin(), vals.end());
    std::vector<CyclotomicValue> want{three * zeta(3, 1), three * zeta(3, 2)};
    std::sort(want.begin(), want.end());
    CHECK(vals == want);
}

TEST_CASE("tables of re-presented groups are Brauer-equivalent") {
    std::mt19937_64 rng(5);
    const auto entries = enumerate_groups(2, 5);
    for (std::size_t k = 0; k < entries.size(); k += 4) {
        const auto G = make_group(entries[k].presentation);
        const auto H = make_group(random_representation(G, rng));
        const auto tg = character_table(G);
        const auto th = character_table(H);
        const auto m = brauer_pair(tg, th);
        REQUIRE(m);
        CHECK(verify_matching(tg, th, *m, true));
    }
}

TEST_CASE("export and import round trip") {
    for (const auto& pres : {dihedral8(), heisenberg(5), theorem1(5, 2)}) {
        const auto t = character_table(make_group(pres));
        const auto text = t.export_text();
        const auto back = CharacterTable::import_text(text);
        CHECK(back.export_text() == text);
        CHECK(back.classes == t.classes);
        CHECK(back.irreducibles == t.irreducibles);
        CHECK(back.power_maps == t.power_maps);
        CHECK(back.verify());
    }
    const auto text = character_table(make_group(dihedral8())).export_text();
    CHECK_THROWS_AS(CharacterTable::import_text(""), InvalidInput);
    CHECK_THROWS_AS(CharacterTable::import_text("pgf-chartab v2" + text.substr(14)), InvalidInput);
    CHECK_THROWS_AS(CharacterTable::import_text(text.substr(0, text.rfind("chi"))), InvalidInput);
    std::string bad = text;
    bad.replace(bad.rfind('1'), 1, "q");
    CHECK_THROWS_AS(CharacterTable::import_text(bad), InvalidInput);
}

TEST_CASE("class bound") {
    CharTableOptions opts;
    opts.max_classes = 10;
    CHECK_THROWS_AS(character_table(make_group(elementary_abelian_presentation(2, 4)), opts), BoundExceeded);
    CHECK_NOTHROW(character_table(make_group(dihedral8()), opts));
}

TEST_CASE("Brauer and twin verdicts for the p = 5 families") {
    const IdContext ids;
    const auto w1 = family_parameters(Family::tuple1, 5);
    const auto a = make_group(paper_family({Family::tuple1, 5, w1[0]}));
    const auto b = make_group(paper_family({Family::tuple1, 5, w1[1]}));
    const auto ta = character_table(a);
    const auto tb = character_table(b);
    CHECK(ta.verify());
    const auto m = brauer_pair(ta, tb);
    REQUIRE(m);
    CHECK(verify_matching(ta, tb, *m, true));
    CHECK_FALSE(are_twins(a, b, ids));

    const auto w2 = family_parameters(Family::tuple2, 5);
    const auto c = make_group(paper_family({Family::tuple2, 5, w2[0]}));
    const auto d = make_group(paper_family({Family::tuple2, 5, w2[1]}));
    CHECK(are_twins(c, d, ids));
}

TEST_CASE("cyclic group of prime order") {
    for (int p : {2, 3, 5, 7}) {
        const auto G = make_group(cyclic_presentation(p, 1));
        const auto t = character_table(G);
        REQUIRE(t.irreducibles.size() == static_cast<std::size_t>(p));
        // class c is g^c; every row is k -> zeta^(k c) for some k, all k occurring once
        std::set<std::uint32_t> ks;
        for (const auto& row : t.irreducibles) {
            std::uint32_t k = 0;
            while (k < static_cast<std::uint32_t>(p) && !(row[1] == zeta(p, k))) ++k;
            REQUIRE(k < static_cast<std::uint32_t>(p));
            ks.insert(k);
            for (std::uint32_t c = 0; c < static_cast<std::uint32_t>(p); ++c) {
                const Elem x = G->pow(G->generator(0), c);
                CHECK(row[G->class_of(x)] == zeta(p, k * c));
            }
        }
        CHECK(ks.size() == static_cast<std::size_t>(p));
    }
}

TEST_CASE("power maps compose multiplicatively") {
    for (const auto& pres : {theorem1(5, 1), dihedral8(), heisenberg(3)}) {
        const auto G = make_group(pres);
        const auto e = G->exponent();
        for (long long n = 0; n < 8; ++n)
            for (long long m = 0; m < 8; ++m) {
                const auto pn = power_map(G, n);
                const auto pm = power_map(G, m);
                const auto pnm = power_map(G, (n * m) % e);
                for (std::size_t c = 0; c < pn.size(); ++c) CHECK(pn[pm[c]] == pnm[c]);
            }
        CHECK(power_map(G, 1) == [&] {
            std::vector<std::uint32_t> id(G->classes().size());
            for (std::size_t c = 0; c < id.size(); ++c) id[c] = static_cast<std::uint32_t>(c);
            return id;
        }());
    }
}

TEST_CASE("matching verdicts are symmetric and decisive") {
    const auto c4 = character_table(make_group(cyclic_presentation(2, 2)));
    const auto v4 = character_table(make_group(elementary_abelian_presentation(2, 2)));
    CHECK_FALSE(char_tables_equivalent(c4, v4));
    CHECK_FALSE(char_tables_equivalent(v4, c4));
    const auto d8 = character_table(make_group(dihedral8()));
    const auto q8 = character_table(make_group(quaternion8()));
    const auto back = char_tables_equivalent(q8, d8);
    REQUIRE(back);
    CHECK(verify_matching(q8, d8, *back, false));
    CHECK_FALSE(verify_matching(q8, d8, *back, true));
    CHECK_FALSE(brauer_pair(q8, d8));
    const auto d8d8 = char_tables_equivalent(d8, d8);
    REQUIRE(d8d8);
    CHECK(verify_matching(d8, d8, *d8d8, false));
    // different orders never match
    CHECK_FALSE(char_tables_equivalent(d8, character_table(make_group(heisenberg(3)))));
}
