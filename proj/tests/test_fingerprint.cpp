#include <algorithm>
#include <random>

#include "doctest.h"
#include "helpers.hpp"
#include "pgf/errors.hpp"
#include "pgf/fingerprint.hpp"
#include "pgf/structure.hpp"

using namespace pgf;
using namespace pgf::testing;

namespace {

CatalogSet catalogs_for(const std::vector<std::pair<int, int>>& wanted) {
    CatalogSet set;
    for (auto [p, n] : wanted) set.add(LoadedCatalog{p, n, enumerate_groups(p, n)});
    return set;
}

// Conjugacy classes of proper subgroups by brute force: (order, length) pairs.
std::vector<std::pair<std::size_t, std::size_t>> brute_subgroup_classes(const GroupPtr& G) {
    std::vector<std::pair<std::size_t, std::size_t>> out;
    std::set<std::vector<Elem>> seen;
    for (const auto& H : brute_subgroups(G)) {
        if (H.size() == G->order() || seen.count(H)) continue;
        std::set<std::vector<Elem>> orbit;
        for (Elem g = 0; g < G->order(); ++g) {
            std::vector<Elem> K;
            for (Elem h : H) K.push_back(G->conj(h, g));
            std::sort(K.begin(), K.end());
            orbit.insert(K);
        }
        seen.insert(orbit.begin(), orbit.end());
        out.emplace_back(H.size(), orbit.size());
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::size_t count_len(const SubgroupFingerprint& sf, std::uint32_t len, std::uint32_t order) {
    return static_cast<std::size_t>(std::count_if(sf.entries.begin(), sf.entries.end(), [&](const auto& e) {
        return e.first == len && e.second.order == order;
    }));
}

}  // namespace

TEST_CASE("identifiers use catalog indices when available") {
    const auto cats = catalogs_for({{2, 2}, {2, 3}});
    const IdContext ids(&cats);
    const auto q8 = ids.identify(make_group(quaternion8()));
    CHECK(q8.by_catalog());
    CHECK(q8.order == 8);
    CHECK(q8.to_string() == "(8," + std::to_string(q8.index) + ")");
    CHECK(ids.identify(make_group(cyclic_presentation(2, 1))).to_string() == "(2,1)");

    const IdContext bare;
    const auto by_code = bare.identify(make_group(quaternion8()));
    CHECK_FALSE(by_code.by_catalog());
    CHECK(by_code.code == canonical_code(make_group(quaternion8())));
    CHECK(by_code.to_string().front() == '[');
}

TEST_CASE("missing catalog entry is an integrity error") {
    auto entries = enumerate_groups(2, 3);
    const auto q8code = canonical_code(make_group(quaternion8()));
    entries.erase(std::remove_if(entries.begin(), entries.end(), [&](const auto& e) { return e.code == q8code; }),
                  entries.end());
    for (std::size_t i = 0; i < entries.size(); ++i) entries[i].index = static_cast<std::uint32_t>(i + 1);
    CatalogSet cats;
    cats.add(LoadedCatalog{2, 3, entries});
    const IdContext ids(&cats);
    CHECK_THROWS_AS(ids.identify(make_group(quaternion8())), IntegrityError);
}

TEST_CASE("subgroup and factor fingerprints of D8 and Q8") {
    const auto cats = catalogs_for({{2, 2}, {2, 3}});
    const IdContext ids(&cats);
    const auto d8 = make_group(dihedral8());
    const auto q8 = make_group(quaternion8());
    const auto sd = subgroup_fingerprint(d8, ids);
    const auto sq = subgroup_fingerprint(q8, ids);
    CHECK(sd.entries.size() == 7);
    CHECK(sq.entries.size() == 5);
    CHECK(count_len(sd, 2, 2) == 2);
    CHECK(count_len(sd, 1, 2) == 1);
    CHECK(count_len(sq, 1, 2) == 1);
    CHECK(count_len(sq, 2, 2) == 0);
    CHECK_FALSE(sd == sq);
    // both have quotients C2 x C2, C2 (three times) and 1
    const auto fd = factor_fingerprint(d8, ids);
    CHECK(fd == factor_fingerprint(q8, ids));
    CHECK(fd.entries.size() == 5);
    CHECK_FALSE(are_siblings(d8, q8, ids));
}

TEST_CASE("subgroup fingerprint matches brute-force class counts") {
    const IdContext ids;
    for (auto [p, n] : {std::pair{2, 4}, std::pair{3, 3}}) {
        for (const auto& e : enumerate_groups(p, n)) {
            const auto G = make_group(e.presentation);
            const auto sf = subgroup_fingerprint(G, ids);
            std::vector<std::pair<std::size_t, std::size_t>> got;
            for (const auto& [len, id] : sf.entries) got.emplace_back(id.order, len);
            std::sort(got.begin(), got.end());
            CHECK(got == brute_subgroup_classes(G));
            CHECK(factor_fingerprint(G, ids).entries.size() == normal_subgroups(G).size());
        }
    }
}

TEST_CASE("G_1 and G_v are siblings at p = 5") {
    const auto cats = catalogs_for({{5, 2}, {5, 3}});
    const IdContext ids(&cats);
    const auto g1 = make_group(theorem1(5, 1));
    const auto gv = make_group(theorem1(5, family_parameters(Family::theorem1_Gx, 5)[1]));
    const auto a = sibling_fingerprint(g1, ids);
    const auto b = sibling_fingerprint(gv, ids);
    CHECK(a == b);
    CHECK(a.hash() == b.hash());
    CHECK(are_siblings(g1, gv, ids));
    CHECK_FALSE(are_siblings(g1, g1, ids));
}

TEST_CASE("sibling fingerprint is invariant under re-presentation") {
    const auto cats = catalogs_for({{2, 2}, {2, 3}, {2, 4}});
    const IdContext ids(&cats);
    std::mt19937_64 rng(11);
    const auto entries = enumerate_groups(2, 5);
    for (std::size_t k = 0; k < entries.size(); k += 5) {
        const auto G = make_group(entries[k].presentation);
        const auto ss = sibling_fingerprint(G, ids);
        for (int r = 0; r < 3; ++r) {
            const auto H = make_group(random_representation(G, rng));
            CHECK(sibling_fingerprint(H, ids).serialize() == ss.serialize());
        }
    }
}

TEST_CASE("sibling census at small orders") {
    const auto cats = catalogs_for({{2, 2}, {2, 3}, {2, 4}, {3, 2}, {3, 3}});
    const IdContext ids(&cats);
    CHECK(sibling_census(enumerate_groups(2, 4), ids).empty());
    CHECK(sibling_census(enumerate_groups(2, 5), ids).empty());
    CHECK(sibling_census(enumerate_groups(3, 4), ids).empty());
    CHECK(format_census({}) == "pairs=0 triples=0 quadruples=0\n");
}

TEST_CASE("census at 5^4 finds exactly the G_1, G_v pair") {
    const auto cats = catalogs_for({{5, 2}, {5, 3}, {5, 4}});
    const IdContext ids(&cats);
    std::size_t calls = 0;
    CensusOptions opts;
    opts.progress = [&](std::size_t done, std::size_t total) {
        ++calls;
        CHECK(done <= total);
    };
    const auto buckets = sibling_census(cats.entries(625), ids, opts);
    CHECK(calls == 15);
    REQUIRE(buckets.size() == 1);
    const auto i1 = ids.identify(make_group(theorem1(5, 1))).index;
    const auto iv = ids.identify(make_group(theorem1(5, family_parameters(Family::theorem1_Gx, 5)[1]))).index;
    std::vector<std::uint32_t> expect{std::min(i1, iv), std::max(i1, iv)};
    CHECK(buckets[0].order == 625);
    CHECK(buckets[0].indices == expect);
    CHECK(format_census(buckets) == "625 2 " + std::to_string(expect[0]) + " " + std::to_string(expect[1]) +
                                        "\npairs=1 triples=0 quadruples=0\n");
}

TEST_CASE("census result does not depend on the thread count") {
    const auto cats = catalogs_for({{5, 2}, {5, 3}});
    const IdContext ids(&cats);
    const auto entries = enumerate_groups(5, 4);
    CensusOptions one, four;
    four.threads = 4;
    const auto a = sibling_census(entries, ids, one);
    const auto b = sibling_census(entries, ids, four);
    CHECK(a.size() == 1);
    CHECK(format_census(a) == format_census(b));
}
