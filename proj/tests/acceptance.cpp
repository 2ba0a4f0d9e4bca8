// Acceptance run: one PASS/FAIL line per criterion. Criterion 9 is the long
// order-128 run and does not gate the exit status.

#include <chrono>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <sstream>

#include "CLI11.hpp"
#include "helpers.hpp"
#include "pgf/canon.hpp"
#include "pgf/catalog.hpp"
#include "pgf/chartab.hpp"
#include "pgf/fingerprint.hpp"
#include "pgf/idtree.hpp"
#include "pgf/structure.hpp"

using namespace pgf;
using namespace pgf::testing;

namespace {

struct Outcome {
    bool pass = true;
    std::ostringstream detail;

    void fail(const std::string& why) {
        if (pass) detail.str("");
        pass = false;
        detail << why << "; ";
    }
    void note(const std::string& what) {
        if (pass) detail << what << "; ";
    }
};

std::uint32_t ipow(std::uint32_t b, int e) {
    std::uint32_t r = 1;
    while (e-- > 0) r *= b;
    return r;
}

// Catalogs of every order p^k, 2 <= k <= n, for the given primes.
CatalogSet catalogs_upto(const std::vector<std::pair<int, int>>& bounds) {
    CatalogSet set;
    for (auto [p, n] : bounds)
        for (int k = 2; k <= n; ++k) set.add(LoadedCatalog{p, k, enumerate_groups(p, k)});
    return set;
}

// ---- criterion 1

void catalog_counts(Outcome& out) {
    const std::map<std::pair<int, int>, std::size_t> expected{{{2, 3}, 5},  {{2, 4}, 14}, {{2, 5}, 51},
                                                              {{2, 6}, 267}, {{3, 4}, 15}, {{5, 4}, 15}};
    std::map<std::pair<int, int>, std::vector<CatalogEntry>> got;
    for (auto [pn, count] : expected) {
        got[pn] = enumerate_groups(pn.first, pn.second);
        if (got[pn].size() != count)
            out.fail("order " + std::to_string(ipow(pn.first, pn.second)) + ": " + std::to_string(got[pn].size()) +
                     " groups, want " + std::to_string(count));
    }
    // independent Cayley-table classification for n <= 4
    for (int n : {3, 4}) {
        const auto reps = brute_classes(all_consistent_presentations(2, n));
        const auto& entries = got[{2, n}];
        std::vector<int> hits(entries.size(), 0);
        for (const auto& G : reps) {
            int matches = 0;
            for (std::size_t i = 0; i < entries.size(); ++i)
                if (brute_isomorphisms(G, make_group(entries[i].presentation), true)) {
                    ++matches;
                    ++hits[i];
                }
            if (matches != 1) out.fail("brute-force class at order " + std::to_string(1u << n) + " matched " +
                                       std::to_string(matches) + " entries");
        }
        if (reps.size() != entries.size() || std::count(hits.begin(), hits.end(), 1) != static_cast<long>(hits.size()))
            out.fail("brute-force oracle gives " + std::to_string(reps.size()) + " classes at order " +
                     std::to_string(1u << n));
        else
            out.note("oracle " + std::to_string(reps.size()) + " at " + std::to_string(1u << n));
    }
    // n in {5, 6}: independent rerun without orbit reduction in reverse order
    EnumerateOptions slow;
    slow.orbit_reduction = false;
    slow.reverse_order = true;
    for (int n : {5, 6}) {
        if (format_catalog(2, n, enumerate_groups(2, n, slow)) != format_catalog(2, n, got[{2, n}]))
            out.fail("cross-check run differs at order " + std::to_string(1u << n));
        else
            out.note("cross-check identical at " + std::to_string(1u << n));
    }
    out.note("counts 5/14/51/267, 15 at 81 and 625");
}

// ---- criterion 2

void sibling_censuses(Outcome& out) {
    const auto cats = catalogs_upto({{2, 5}, {3, 4}, {5, 4}});
    const IdContext ids(&cats);
    for (std::uint32_t order : {16u, 32u, 81u}) {
        const auto buckets = sibling_census(cats.entries(order), ids);
        if (!buckets.empty()) out.fail(std::to_string(buckets.size()) + " sibling buckets at order " + std::to_string(order));
    }
    const auto buckets = sibling_census(cats.entries(625), ids);
    const auto v = family_parameters(Family::theorem1_Gx, 5)[1];
    const auto i1 = ids.identify(make_group(theorem1(5, 1))).index;
    const auto iv = ids.identify(make_group(theorem1(5, v))).index;
    const std::vector<std::uint32_t> want{std::min(i1, iv), std::max(i1, iv)};
    if (buckets.size() != 1 || buckets[0].indices != want)
        out.fail("census at 625 is not exactly {G_1, G_v}: " + format_census(buckets));
    else
        out.note("16/32/81 empty; 625 pair (" + std::to_string(want[0]) + ", " + std::to_string(want[1]) + ") = {G_1, G_v}");
}

// ---- criteria 3 and 4

// Reference models for the isomorphism types named in the tables.
PcPresentation model(const std::string& type, int p) {
    if (type == "Cp") return cyclic_presentation(p, 1);
    if (type == "Cp2") return cyclic_presentation(p, 2);
    if (type == "CpxCp") return elementary_abelian_presentation(p, 2);
    if (type == "Cp2xCp") return direct_product(cyclic_presentation(p, 2), cyclic_presentation(p, 1));
    if (type == "CpxCpxCp") return elementary_abelian_presentation(p, 3);
    if (type == "p3#3") return heisenberg(p);           // nonabelian, exponent p
    if (type == "p3#4") return extraspecial_exp_p2(p);  // nonabelian, exponent p^2
    if (type == "p4#12") return direct_product(heisenberg(p), cyclic_presentation(p, 1));
    if (type == "p4#8") {
        // maximal class, elementary abelian maximal subgroup, a^p central
        PcPresentation pres(p, 4);
        pres.set_commutator(1, 0, unit(4, 2));
        pres.set_commutator(2, 0, unit(4, 3));
        pres.set_power(0, unit(4, 3));
        return pres;
    }
    throw std::logic_error("unknown type " + type);
}

struct Row {
    std::string type;
    int length_exp = 0;                            // class length p^length_exp
    std::vector<std::vector<Exponents>> reps;      // one generator list per listed representative
};

// Generator list built from exponent vectors, one list per a in [lo, hi).
std::vector<std::vector<Exponents>> over_a(int lo, int hi, const std::function<std::vector<Exponents>(int)>& f) {
    std::vector<std::vector<Exponents>> out;
    for (int a = lo; a < hi; ++a) out.push_back(f(a));
    return out;
}

Exponents ex(std::initializer_list<int> v) { return Exponents(v.begin(), v.end()); }

std::vector<Row> sibling_p4_rows(int p) {
    return {
        {"Cp", 0, {{ex({0, 0, 0, 1})}}},
        {"Cp", 1, {{ex({0, 0, 1, 0})}}},
        {"Cp", 2, {{ex({1, 0, 0, 0})}}},
        {"CpxCp", 0, {{ex({0, 0, 1, 0}), ex({0, 0, 0, 1})}}},
        {"CpxCp", 1, {{ex({1, 0, 0, 0}), ex({0, 0, 0, 1})}}},
        {"Cp2", 1, over_a(1, p, [](int a) { return std::vector{ex({1, a, 0, 0}), ex({0, 0, 0, 1})}; })},
        {"Cp2", 1, {{ex({0, 1, 0, 0}), ex({0, 0, 0, 1})}}},
        {"Cp2xCp", 0, {{ex({0, 1, 0, 0}), ex({0, 0, 1, 0}), ex({0, 0, 0, 1})}}},
        {"p3#3", 0, {{ex({1, 0, 0, 0}), ex({0, 0, 1, 0}), ex({0, 0, 0, 1})}}},
        {"p3#4", 0, over_a(1, p, [](int a) { return std::vector{ex({1, a, 0, 0}), ex({0, 0, 1, 0}), ex({0, 0, 0, 1})}; })},
    };
}

std::vector<Row> twin_p5_rows(int p) {
    using V = std::vector<Exponents>;
    return {
        {"Cp", 0, {{ex({0, 0, 0, 0, 1})}}},
        {"Cp", 1, {{ex({0, 0, 0, 1, 0})}}},
        {"Cp", 2, {{ex({0, 0, 1, 0, 0})}}},
        {"Cp", 2, over_a(0, p, [](int a) { return V{ex({0, 1, 0, a, 0})}; })},
        {"CpxCp", 0, {{ex({0, 0, 0, 1, 0}), ex({0, 0, 0, 0, 1})}}},
        {"CpxCp", 1, {{ex({0, 0, 1, 0, 0}), ex({0, 0, 0, 0, 1})}}},
        {"CpxCp", 2, {{ex({0, 0, 1, 0, 0}), ex({0, 0, 0, 1, 0})}}},
        {"CpxCp", 1, over_a(0, p, [](int a) { return V{ex({0, 1, 0, a, 0}), ex({0, 0, 0, 0, 1})}; })},
        {"CpxCp", 2, over_a(0, p, [](int a) { return V{ex({0, 1, a, 0, 0}), ex({0, 0, 0, 1, 0})}; })},
        {"Cp2", 2, over_a(0, p, [](int a) { return V{ex({1, a, 0, 0, 0}), ex({0, 0, 0, 0, 1})}; })},
        {"CpxCpxCp", 0, {{ex({0, 0, 1, 0, 0}), ex({0, 0, 0, 1, 0}), ex({0, 0, 0, 0, 1})}}},
        {"CpxCpxCp", 1, {{ex({0, 1, 0, 0, 0}), ex({0, 0, 0, 1, 0}), ex({0, 0, 0, 0, 1})}}},
        {"p3#3", 1, over_a(0, p, [](int a) { return V{ex({0, 1, 0, a, 0}), ex({0, 0, 1, 0, 0}), ex({0, 0, 0, 0, 1})}; })},
        {"p3#4", 1, over_a(0, p, [](int a) { return V{ex({1, a, 0, 0, 0}), ex({0, 0, 0, 1, 0}), ex({0, 0, 0, 0, 1})}; })},
        {"p4#12", 0, {{ex({0, 1, 0, 0, 0}), ex({0, 0, 1, 0, 0}), ex({0, 0, 0, 1, 0}), ex({0, 0, 0, 0, 1})}}},
        {"p4#8", 0,
         over_a(0, p, [](int a) {
             return V{ex({1, a, 0, 0, 0}), ex({0, 0, 1, 0, 0}), ex({0, 0, 0, 1, 0}), ex({0, 0, 0, 0, 1})};
         })},
    };
}

// Brute-force closure and conjugates from the Cayley table.
std::vector<Elem> closure(const GroupPtr& G, const std::vector<Elem>& gens) {
    std::set<Elem> s{0};
    std::vector<Elem> queue{0};
    for (std::size_t h = 0; h < queue.size(); ++h)
        for (Elem g : gens) {
            const Elem y = G->mul(queue[h], g);
            if (s.insert(y).second) queue.push_back(y);
        }
    return {s.begin(), s.end()};
}

std::set<std::vector<Elem>> conjugates(const GroupPtr& G, const std::vector<Elem>& U) {
    std::set<std::vector<Elem>> out;
    for (Elem g = 0; g < G->order(); ++g) {
        std::vector<Elem> V;
        for (Elem u : U) V.push_back(G->mul(G->inv(g), G->mul(u, g)));
        std::sort(V.begin(), V.end());
        out.insert(std::move(V));
    }
    return out;
}

// Checks every listed representative against its row, their pairwise
// non-conjugacy, and the bijection with the library's subgroup classes.
void check_table(Outcome& out, const std::string& name, const GroupPtr& G, const std::vector<Row>& rows) {
    const int p = G->prime();
    std::map<std::string, GroupPtr> models;
    struct Listed {
        std::size_t row;
        std::set<std::vector<Elem>> orbit;
    };
    std::vector<Listed> listed;
    for (std::size_t r = 0; r < rows.size(); ++r) {
        const auto& row = rows[r];
        if (!models.count(row.type)) models[row.type] = make_group(model(row.type, p));
        const auto& M = models[row.type];
        for (const auto& words : row.reps) {
            std::vector<Elem> gens;
            for (const auto& w : words) gens.push_back(G->element(w));
            const auto U = closure(G, gens);
            auto orbit = conjugates(G, U);
            const auto sub = subgroup_as_group(Subgroup::from_members(G, U));
            if (!brute_isomorphisms(sub, M, true))
                out.fail(name + " row " + std::to_string(r + 1) + ": representative is not " + row.type);
            if (orbit.size() != ipow(static_cast<std::uint32_t>(p), row.length_exp))
                out.fail(name + " row " + std::to_string(r + 1) + ": class length " + std::to_string(orbit.size()));
            listed.push_back({r, std::move(orbit)});
        }
    }
    for (std::size_t i = 0; i < listed.size(); ++i)
        for (std::size_t j = i + 1; j < listed.size(); ++j)
            if (listed[i].orbit == listed[j].orbit)
                out.fail(name + ": rows " + std::to_string(listed[i].row + 1) + " and " + std::to_string(listed[j].row + 1) +
                         " list conjugate subgroups");
    // library classes of nontrivial proper subgroups <-> listed representatives
    std::size_t nontrivial = 0;
    std::vector<int> hit(listed.size(), 0);
    for (const auto& cls : subgroup_conjugacy_classes(G)) {
        if (cls.representative.order() == 1) continue;
        ++nontrivial;
        auto rep = cls.representative.elements();
        std::sort(rep.begin(), rep.end());
        int found = -1;
        for (std::size_t i = 0; i < listed.size(); ++i)
            if (listed[i].orbit.count(rep)) found = static_cast<int>(i);
        if (found < 0) {
            out.fail(name + ": library class of order " + std::to_string(cls.representative.order()) + " not in the table");
            continue;
        }
        ++hit[static_cast<std::size_t>(found)];
        if (cls.length != listed[static_cast<std::size_t>(found)].orbit.size())
            out.fail(name + ": library class length differs for row " + std::to_string(listed[static_cast<std::size_t>(found)].row + 1));
    }
    if (nontrivial != listed.size() || std::count(hit.begin(), hit.end(), 1) != static_cast<long>(hit.size()))
        out.fail(name + ": " + std::to_string(nontrivial) + " library classes vs " + std::to_string(listed.size()) +
                 " table entries");
}

void sibling_p4_table(Outcome& out) {
    for (int p : {5, 7}) {
        const auto cats = catalogs_upto({{p, 3}});
        const IdContext ids(&cats);
        const auto v = family_parameters(Family::theorem1_Gx, p)[1];
        const auto g1 = make_group(theorem1(p, 1));
        const auto gv = make_group(theorem1(p, v));
        const auto tag = "p=" + std::to_string(p);
        check_table(out, "G_1 " + tag, g1, sibling_p4_rows(p));
        check_table(out, "G_v " + tag, gv, sibling_p4_rows(p));
        if (!(sibling_fingerprint(g1, ids) == sibling_fingerprint(gv, ids))) out.fail("SS differ at " + tag);
        if (is_isomorphic(g1, gv)) out.fail("G_1 and G_v isomorphic at " + tag);
        out.note(tag + ": 10 rows (" + std::to_string(2 * p + 6) + " classes) reproduced, SS equal, not isomorphic");
    }
}

void twin_p5_table(Outcome& out) {
    const int p = 5;
    const auto cats = catalogs_upto({{p, 4}});
    const IdContext ids(&cats);
    const auto w = family_parameters(Family::tuple2, p);
    const auto a = make_group(paper_family({Family::tuple2, p, w[0]}));
    const auto b = make_group(paper_family({Family::tuple2, p, w[1]}));
    check_table(out, "w=v", a, twin_p5_rows(p));
    check_table(out, "w=v^2", b, twin_p5_rows(p));
    if (!(sibling_fingerprint(a, ids) == sibling_fingerprint(b, ids))) out.fail("SS differ");
    if (is_isomorphic(a, b)) out.fail("w=v and w=v^2 isomorphic");
    out.note("16 rows (44 classes) reproduced for w=v, v^2; SS equal; not isomorphic");
}

// ---- criterion 5

void brauer_verdicts(Outcome& out) {
    const auto d8 = character_table(make_group(dihedral8()));
    const auto q8 = character_table(make_group(quaternion8()));
    if (!char_tables_equivalent(d8, q8)) out.fail("D8/Q8 tables not equivalent");
    if (brauer_pair(d8, q8)) out.fail("D8/Q8 reported as Brauer pair");

    const auto cats = catalogs_upto({{5, 4}});
    const IdContext ids(&cats);
    for (Family f : {Family::tuple2, Family::tuple1}) {
        const auto w = family_parameters(f, 5);
        const auto G = make_group(paper_family({f, 5, w[0]}));
        const auto H = make_group(paper_family({f, 5, w[1]}));
        const bool brauer = brauer_pair(character_table(G), character_table(H)).has_value();
        const bool twins = are_twins(G, H, ids);
        const std::string name(to_string(f));
        if (!brauer) out.fail(name + " pair is not a Brauer pair");
        if (twins != (f == Family::tuple2)) out.fail(name + " twin verdict " + (twins ? "true" : "false"));
    }
    out.note("D8/Q8 equivalent, no Brauer pair; Tuple 2 twins; Tuple 1 Brauer pair, not twins");
}

// ---- criterion 6

void table_properties(Outcome& out) {
    std::size_t checked = 0;
    auto check = [&](const PcPresentation& pres, const std::string& name) {
        const auto t = character_table(make_group(pres));
        long long sum = 0;
        for (auto d : t.degrees()) sum += static_cast<long long>(d) * d;
        if (!t.verify() || sum != t.group_order || t.irreducibles.size() != t.classes.size())
            out.fail("table of " + name + " fails orthogonality");
        ++checked;
    };
    for (auto [p, top] : {std::pair{2, 6}, std::pair{3, 3}, std::pair{5, 2}, std::pair{7, 2}})
        for (int n = 1; n <= top; ++n)
            for (const auto& e : enumerate_groups(p, n))
                check(e.presentation, "(" + std::to_string(e.order) + "," + std::to_string(e.index) + ")");
    for (Family f : {Family::tuple1, Family::tuple2, Family::tuple3})
        for (int w : family_parameters(f, 5)) check(paper_family({f, 5, w}), std::string(to_string(f)));
    out.note(std::to_string(checked) + " tables exact");
}

// ---- criterion 7

void identification(Outcome& out, std::uint64_t seed) {
    std::size_t total = 0;
    for (auto [p, n] : {std::pair{2, 4}, std::pair{2, 5}, std::pair{2, 6}, std::pair{3, 4}, std::pair{5, 4}}) {
        const auto entries = enumerate_groups(p, n);
        const auto tree = parse_tree(serialize_tree(build_tree(p, n, entries)));
        std::mt19937_64 rng(seed * 1000003 + ipow(static_cast<std::uint32_t>(p), n));
        std::size_t wrong = 0;
        for (const auto& e : entries) {
            const auto G = make_group(e.presentation);
            wrong += identify(tree, G).index != e.index;
            for (int r = 0; r < 10; ++r) wrong += identify(tree, make_group(random_representation(G, rng))).index != e.index;
            total += 11;
        }
        if (wrong) out.fail(std::to_string(wrong) + " misidentified at order " + std::to_string(ipow(p, n)));
    }
    out.note(std::to_string(total) + " identifications, all correct");
}

// ---- criterion 8

void invariance(Outcome& out, std::uint64_t seed) {
    const std::vector<std::pair<int, int>> bounds{{2, 6}, {3, 3}, {5, 2}, {7, 2}};
    CatalogSet cats;
    for (auto [p, top] : bounds)
        for (int k = 2; k < top; ++k) cats.add(LoadedCatalog{p, k, enumerate_groups(p, k)});
    const IdContext ids(&cats);
    std::size_t groups = 0, mismatches = 0;
    for (auto [p, top] : bounds)
        for (int n = 1; n <= top; ++n) {
            const auto steps = pipeline(p, n);
            const auto schedule = default_power_schedule(p, n);
            auto payloads = [&](const GroupPtr& G) {
                std::vector<std::string> keys;
                std::ostringstream ss;
                for (auto x : sibling_fingerprint(G, ids).serialize()) ss << x << ',';
                keys.push_back(ss.str());
                for (const auto& s : steps) keys.push_back(invariant_step(G, s, schedule).key());
                return keys;
            };
            std::mt19937_64 rng(seed * 7919 + ipow(static_cast<std::uint32_t>(p), n));
            for (const auto& e : enumerate_groups(p, n)) {
                const auto G = make_group(e.presentation);
                const auto base = payloads(G);
                for (int r = 0; r < 20; ++r)
                    if (payloads(make_group(random_representation(G, rng))) != base) {
                        ++mismatches;
                        out.fail("payload changed for (" + std::to_string(e.order) + "," + std::to_string(e.index) + ")");
                    }
                ++groups;
            }
        }
    if (!mismatches) out.note(std::to_string(groups) + " groups x 20 re-presentations unchanged");
}

// ---- criterion 9

void order128(Outcome& out, unsigned threads) {
    EnumerateOptions opts;
    opts.allow_long = true;
    const auto entries = enumerate_groups(2, 7, opts);
    if (entries.size() != 2328) out.fail(std::to_string(entries.size()) + " groups of order 128, want 2328");
    const auto cats = catalogs_upto({{2, 6}});
    const IdContext ids(&cats);
    CensusOptions copts;
    copts.threads = threads;
    const auto buckets = sibling_census(entries, ids, copts);
    std::size_t pairs = 0, other = 0, twins = 0;
    std::string listed;
    for (const auto& b : buckets) {
        if (b.indices.size() != 2) {
            ++other;
            continue;
        }
        ++pairs;
        listed += " " + std::to_string(b.indices[0]) + "/" + std::to_string(b.indices[1]);
        twins += are_twins(make_group(entries[b.indices[0] - 1].presentation),
                           make_group(entries[b.indices[1] - 1].presentation), ids);
    }
    if (pairs != 3 || other) out.fail(format_census(buckets));
    if (twins) out.fail(std::to_string(twins) + " twin pairs at order 128");
    out.note("2328 groups; sibling pairs" + listed + "; 0 twin pairs");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"acceptance criteria"};
    std::vector<int> only;
    bool skip_stretch = false;
    unsigned threads = 1;
    std::uint64_t seed = 1;
    app.add_option("--only", only, "Run only these criteria")->delimiter(',');
    app.add_flag("--skip-stretch", skip_stretch, "Skip the optional order-128 criterion");
    app.add_option("--threads", threads, "Worker threads for the order-128 census");
    app.add_option("--seed", seed, "Seed for random re-presentations");
    CLI11_PARSE(app, argc, argv);

    const std::vector<std::pair<std::string, std::function<void(Outcome&)>>> criteria{
        {"catalog counts", catalog_counts},
        {"sibling censuses", sibling_censuses},
        {"order p^4 sibling subgroup table", sibling_p4_table},
        {"order p^5 twin subgroup table", twin_p5_table},
        {"Brauer and twin verdicts", brauer_verdicts},
        {"character table properties", table_properties},
        {"identification round-trip", [&](Outcome& o) { identification(o, seed); }},
        {"invariance under re-presentation", [&](Outcome& o) { invariance(o, seed); }},
        {"order 128 stretch", [&](Outcome& o) { order128(o, threads); }},
    };
    bool ok = true;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const int number = static_cast<int>(i) + 1;
        if (!only.empty() && std::find(only.begin(), only.end(), number) == only.end()) continue;
        if (number == 9 && skip_stretch) {
            std::cout << "criterion 9 SKIP " << criteria[i].first << " (optional)\n";
            continue;
        }
        Outcome out;
        const auto start = std::chrono::steady_clock::now();
        try {
            criteria[i].second(out);
        } catch (const std::exception& e) {
            out.fail(std::string("exception: ") + e.what());
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        std::cout << "criterion " << number << ' ' << (out.pass ? "PASS" : "FAIL") << ' ' << criteria[i].first << ": "
                  << out.detail.str() << "[" << std::fixed << std::setprecision(1) << secs << " s]" << std::endl;
        if (!out.pass && number != 9) ok = false;
    }
    return ok ? 0 : 1;
}
