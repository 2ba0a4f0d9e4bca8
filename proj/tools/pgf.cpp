// pgf command-line tool. Exit codes: 0 ok, 1 internal error, 2 invalid input,
// 3 size or budget bound exceeded, 4 integrity failure.

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "pgf/canon.hpp"
#include "pgf/catalog.hpp"
#include "pgf/chartab.hpp"
#include "pgf/errors.hpp"
#include "pgf/families.hpp"
#include "pgf/fingerprint.hpp"
#include "pgf/idtree.hpp"
#include "pgf/structure.hpp"

using namespace pgf;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct Common {
    std::string format = "text";
    std::string catalog_dir;
    unsigned threads = 1;
    std::uint64_t seed = 1;
    bool records() const { return format == "records"; }
};

void emit(const json& j) { std::cout << j.dump() << '\n'; }

std::string read_text(const std::string& path) {
    if (path == "-") {
        std::ostringstream ss;
        ss << std::cin.rdbuf();
        return ss.str();
    }
    std::ifstream f(path, std::ios::binary);
    if (!f) throw InvalidInput("cannot read " + path);
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

// A presentation argument is a file ("-" for stdin) or an inline record.
std::vector<PcPresentation> read_presentations(const std::string& arg) {
    std::string text;
    if (arg == "-" || fs::exists(arg)) {
        text = read_text(arg);
    } else {
        text = arg;
    }
    std::vector<PcPresentation> out;
    std::istringstream in(text);
    for (std::string line; std::getline(in, line);) {
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') continue;
        while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
        out.push_back(PcPresentation::parse(line.substr(first)));
    }
    if (out.empty()) throw InvalidInput("no presentation given");
    return out;
}

PcPresentation read_one(const std::string& arg) {
    auto all = read_presentations(arg);
    if (all.size() != 1) throw InvalidInput("expected exactly one presentation in " + arg);
    return all[0];
}

int log_p(std::uint32_t order, int p) {
    int n = 0;
    while (order > 1) {
        order /= static_cast<std::uint32_t>(p);
        ++n;
    }
    return n;
}

// Catalogs of the proper orders p^2 .. p^(n-1) used to name subgroups and quotients.
CatalogSet smaller_catalogs(const Common& c, int p, int n) {
    std::vector<std::pair<int, int>> wanted;
    for (int k = 2; k < n; ++k)
        if (enumeration_feasible(p, k)) wanted.emplace_back(p, k);
    std::string dir = c.catalog_dir;
    if (dir.empty())
        if (const char* env = std::getenv("PGF_CATALOG_DIR")) dir = env;
    if (!dir.empty()) return CatalogSet::from_directory(dir, wanted, true);
    CatalogSet set;
    for (auto [q, k] : wanted) set.add(LoadedCatalog{q, k, enumerate_groups(q, k)});
    return set;
}

json id_json(const Identifier& id) {
    if (id.by_catalog()) return json{{"order", id.order}, {"index", id.index}};
    return json{{"order", id.order}, {"code", id.code.to_string()}};
}

std::string join_ids(const std::vector<Identifier>& ids) {
    std::string s;
    for (const auto& id : ids) s += (s.empty() ? "" : " ") + id.to_string();
    return s;
}

int cmd_enumerate(const Common& c, int p, int n, const std::string& out, bool allow_long, bool no_orbits) {
    EnumerateOptions opts;
    opts.allow_long = allow_long;
    opts.orbit_reduction = !no_orbits;
    const auto entries = enumerate_groups(p, n, opts);
    if (!out.empty()) {
        save_catalog(entries, p, n, out);
        if (c.records())
            emit({{"record", "catalog"}, {"p", p}, {"n", n}, {"count", entries.size()}, {"path", out}});
        else
            std::cout << "wrote " << entries.size() << " groups of order " << p << "^" << n << " to " << out << '\n';
    } else {
        std::cout << format_catalog(p, n, entries);
    }
    return 0;
}

int cmd_tree_build(const Common& c, const std::string& catalog, const std::string& out) {
    const auto cat = load_catalog(catalog);
    const auto tree = build_tree(cat.p, cat.n, cat.entries);
    save_tree(tree, out);
    if (c.records()) {
        emit({{"record", "tree"},
              {"p", cat.p},
              {"n", cat.n},
              {"groups", cat.entries.size()},
              {"nodes", tree.nodes.size()},
              {"leaves", tree.leaf_count()},
              {"max_leaf", tree.max_leaf_size()},
              {"path", out}});
    } else {
        std::cout << "tree for order " << tree.order() << ": " << cat.entries.size() << " groups, " << tree.nodes.size()
                  << " nodes, " << tree.leaf_count() << " leaves, largest leaf " << tree.max_leaf_size() << '\n';
    }
    return 0;
}

int cmd_identify(const Common& c, const std::string& tree_path, const std::string& input, int budget) {
    const auto tree = load_tree(tree_path);
    IdentifyOptions opts;
    opts.seed = c.seed;
    opts.random_budget = budget;
    for (const auto& pres : read_presentations(input)) {
        const auto res = identify(tree, make_group(pres), opts);
        if (c.records()) {
            json path = json::array();
            for (const auto& s : res.path) path.push_back(s.to_string());
            emit({{"record", "identify"},
                  {"order", tree.order()},
                  {"index", res.index},
                  {"steps", path},
                  {"isomorphism", res.resolved_by_isomorphism}});
        } else {
            std::cout << "(" << tree.order() << "," << res.index << ")\n";
        }
    }
    return 0;
}

std::vector<SiblingBucket> run_census(const Common& c, const LoadedCatalog& cat, const IdContext& ids) {
    CensusOptions opts;
    opts.threads = c.threads;
    return sibling_census(cat.entries, ids, opts);
}

int cmd_siblings(const Common& c, const std::string& catalog) {
    const auto cat = load_catalog(catalog);
    const auto smaller = smaller_catalogs(c, cat.p, cat.n);
    const IdContext ids(&smaller);
    const auto buckets = run_census(c, cat, ids);
    if (c.records()) {
        std::size_t counts[5] = {};
        for (const auto& b : buckets) {
            emit({{"record", "siblings"}, {"order", b.order}, {"indices", b.indices}});
            if (b.indices.size() <= 4) ++counts[b.indices.size()];
        }
        emit({{"record", "census"}, {"pairs", counts[2]}, {"triples", counts[3]}, {"quadruples", counts[4]}});
    } else {
        std::cout << format_census(buckets);
    }
    return 0;
}

int cmd_twins(const Common& c, const std::string& catalog, const std::string& family, int p) {
    std::vector<std::pair<std::string, GroupPtr>> groups;
    std::vector<std::vector<std::size_t>> candidate_sets;
    std::optional<CatalogSet> smaller;
    if (!catalog.empty()) {
        const auto cat = load_catalog(catalog);
        smaller = smaller_catalogs(c, cat.p, cat.n);
        const IdContext ids(&*smaller);
        for (const auto& b : run_census(c, cat, ids)) {
            std::vector<std::size_t> set;
            for (auto i : b.indices) {
                set.push_back(groups.size());
                groups.emplace_back("(" + std::to_string(b.order) + "," + std::to_string(i) + ")",
                                    make_group(cat.entries[i - 1].presentation));
            }
            candidate_sets.push_back(std::move(set));
        }
    } else {
        const Family f = parse_family(family);
        std::vector<std::size_t> set;
        for (int w : family_parameters(f, p)) {
            set.push_back(groups.size());
            groups.emplace_back(std::string(to_string(f)) + ":" + std::to_string(p) + ":" + std::to_string(w),
                                make_group(paper_family({f, p, w})));
        }
        candidate_sets.push_back(std::move(set));
        if (!groups.empty()) smaller = smaller_catalogs(c, p, log_p(groups[0].second->order(), p));
    }
    const IdContext ids(smaller ? &*smaller : nullptr);
    std::size_t twins = 0;
    std::map<std::size_t, CharacterTable> tables;
    auto table = [&](std::size_t i) -> const CharacterTable& {
        auto it = tables.find(i);
        if (it == tables.end()) it = tables.emplace(i, character_table(groups[i].second)).first;
        return it->second;
    };
    for (const auto& set : candidate_sets)
        for (std::size_t a = 0; a < set.size(); ++a)
            for (std::size_t b = a + 1; b < set.size(); ++b) {
                const auto& [na, ga] = groups[set[a]];
                const auto& [nb, gb] = groups[set[b]];
                // catalog buckets are sibling buckets already
                const bool sib = catalog.empty() ? are_siblings(ga, gb, ids) : true;
                const bool brauer = brauer_pair(table(set[a]), table(set[b])).has_value();
                twins += sib && brauer;
                if (c.records())
                    emit({{"record", "twins"}, {"a", na}, {"b", nb}, {"siblings", sib}, {"brauer", brauer},
                          {"twins", sib && brauer}});
                else
                    std::cout << na << ' ' << nb << " siblings=" << (sib ? "yes" : "no")
                              << " brauer=" << (brauer ? "yes" : "no") << " twins=" << (sib && brauer ? "yes" : "no")
                              << '\n';
            }
    if (c.records())
        emit({{"record", "twin-census"}, {"twin_pairs", twins}});
    else
        std::cout << "twin-pairs=" << twins << '\n';
    return 0;
}

int cmd_fingerprint(const Common& c, const std::string& input) {
    const auto G = make_group(read_one(input));
    const auto smaller = smaller_catalogs(c, G->prime(), G->ngens());
    const IdContext ids(&smaller);
    const auto ss = sibling_fingerprint(G, ids);
    if (c.records()) {
        json sf = json::array(), ff = json::array(), up = json::array(), low = json::array();
        for (const auto& [len, id] : ss.sf.entries) sf.push_back({{"length", len}, {"id", id_json(id)}});
        for (const auto& id : ss.ff.entries) ff.push_back(id_json(id));
        for (const auto& id : ss.upper_series_ids) up.push_back(id_json(id));
        for (const auto& id : ss.lower_series_ids) low.push_back(id_json(id));
        emit({{"record", "fingerprint"},
              {"order", G->order()},
              {"hash", ss.hash()},
              {"subgroups", sf},
              {"factors", ff},
              {"frattini", id_json(ss.frattini_id)},
              {"upper", up},
              {"lower", low}});
        return 0;
    }
    std::cout << "order " << G->order() << "\nhash " << std::hex << ss.hash() << std::dec << "\nsubgroups";
    for (const auto& [len, id] : ss.sf.entries) std::cout << ' ' << len << 'x' << id.to_string();
    std::cout << "\nfactors " << join_ids(ss.ff.entries);
    std::cout << "\nfrattini " << ss.frattini_id.to_string();
    std::cout << "\nupper " << join_ids(ss.upper_series_ids);
    std::cout << "\nlower " << join_ids(ss.lower_series_ids) << '\n';
    return 0;
}

int cmd_chartab(const Common&, const std::string& input, const std::string& out) {
    const auto t = character_table(make_group(read_one(input)));
    if (out.empty()) {
        std::cout << t.export_text();
    } else {
        std::ofstream f(out, std::ios::binary);
        if (!f) throw InvalidInput("cannot write " + out);
        f << t.export_text();
    }
    return 0;
}

int cmd_brauer(const Common& c, const std::string& a, const std::string& b) {
    const auto ta = character_table(make_group(read_one(a)));
    const auto tb = character_table(make_group(read_one(b)));
    const auto eq = char_tables_equivalent(ta, tb);
    const auto br = brauer_pair(ta, tb);
    if (c.records()) {
        json j{{"record", "brauer"}, {"equivalent", eq.has_value()}, {"brauer_pair", br.has_value()}};
        if (br)
            j["tau"] = br->tau;
        else if (eq)
            j["tau"] = eq->tau;
        emit(j);
    } else {
        std::cout << "tables-equivalent=" << (eq ? "yes" : "no") << " brauer-pair=" << (br ? "yes" : "no") << '\n';
        if (const auto& m = br ? br : eq) {
            std::cout << "tau";
            for (auto t : m->tau) std::cout << ' ' << t;
            std::cout << '\n';
        }
    }
    return 0;
}

int cmd_isoclinic(const Common& c, const std::string& a, const std::string& b) {
    const auto w = isoclinic(make_group(read_one(a)), make_group(read_one(b)));
    if (c.records()) {
        json j{{"record", "isoclinic"}, {"isoclinic", w.has_value()}};
        if (w) {
            j["alpha"] = w->alpha;
            j["derived_generators"] = w->derived_generators;
            j["beta"] = w->beta;
        }
        emit(j);
    } else {
        std::cout << "isoclinic=" << (w ? "yes" : "no") << '\n';
    }
    return 0;
}

int cmd_family(const Common& c, const std::string& name, int p, int param) {
    const auto pres = paper_family({parse_family(name), p, param});
    const bool ok = pres.is_consistent();
    if (c.records())
        emit({{"record", "family"}, {"family", name}, {"p", p}, {"parameter", param},
              {"presentation", pres.to_string()}, {"order", pres.order()}, {"consistent", ok}});
    else
        std::cout << pres.to_string() << "\norder " << pres.order() << "\nconsistent " << (ok ? "yes" : "no") << '\n';
    return 0;
}

int cmd_bench(const Common& c, const std::string& tree_path, int trials, const std::string& catalog) {
    if (trials < 1) throw InvalidInput("trials must be positive");
    const auto tree = load_tree(tree_path);
    std::vector<CatalogEntry> entries;
    if (!catalog.empty()) {
        const auto cat = load_catalog(catalog);
        entries = cat.entries;
        check_tree_catalog(tree, cat.p, cat.n, entries);
    } else {
        entries = enumerate_groups(tree.p, tree.n);
        check_tree_catalog(tree, tree.p, tree.n, entries);
    }
    std::mt19937_64 rng(c.seed);
    std::vector<double> times;
    std::size_t through7 = 0, through9 = 0, by_iso = 0, wrong = 0;
    std::vector<GroupPtr> groups;
    for (const auto& e : entries) groups.push_back(make_group(e.presentation));
    IdentifyOptions opts;
    opts.seed = c.seed;
    for (int t = 0; t < trials; ++t) {
        const auto k = static_cast<std::size_t>(rng() % entries.size());
        const auto start = std::chrono::steady_clock::now();
        const auto res = identify(tree, groups[k], opts);
        times.push_back(std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count());
        wrong += res.index != entries[k].index;
        const int deepest = res.path.empty() ? 0 : std::max_element(res.path.begin(), res.path.end(), [](auto& a, auto& b) {
                                                       return a.step < b.step;
                                                   })->step;
        if (res.resolved_by_isomorphism)
            ++by_iso;
        else if (deepest <= 7)
            ++through7;
        else
            ++through9;
    }
    auto sorted = times;
    std::sort(sorted.begin(), sorted.end());
    double mean = 0;
    for (double x : times) mean += x;
    mean /= static_cast<double>(times.size());
    const double median = sorted.size() % 2 ? sorted[sorted.size() / 2]
                                             : (sorted[sorted.size() / 2 - 1] + sorted[sorted.size() / 2]) / 2;
    const double frac7 = static_cast<double>(through7) / trials;
    if (c.records()) {
        emit({{"record", "bench"}, {"order", tree.order()}, {"trials", trials}, {"seed", c.seed},
              {"mean_ms", mean}, {"median_ms", median}, {"through_step7", through7}, {"through_step9", through9},
              {"isomorphism", by_iso}, {"wrong", wrong}});
    } else {
        std::cout << "Order of group    | " << tree.p << "^" << tree.n << "\n";
        std::cout << "Average time [ms] | " << mean << "\n";
        std::cout << "Median time [ms]  | " << median << "\n";
        std::cout << "trials " << trials << " seed " << c.seed << " identified-through-step-7 " << frac7
                  << " through-step-9 " << static_cast<double>(through9) / trials << " by-isomorphism "
                  << static_cast<double>(by_iso) / trials << " wrong " << wrong << '\n';
    }
    return wrong ? 4 : 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"pgf: small p-group catalogs, fingerprints, character tables and identification"};
    app.require_subcommand(1);
    Common c;
    app.add_option("--format", c.format, "Output format")->check(CLI::IsMember({"text", "records"}));
    app.add_option("--catalog-dir", c.catalog_dir, "Directory caching catalogs of smaller orders (or PGF_CATALOG_DIR)");
    app.add_option("--threads", c.threads, "Worker threads for censuses")->check(CLI::Range(1u, 256u));
    app.add_option("--seed", c.seed, "Seed for all randomized steps");

    int p = 0, n = 0, param = 0, trials = 1000, budget = 20;
    bool allow_long = false, no_orbits = false;
    std::string out, catalog, tree, input, a, b, family;
    std::function<int()> run;

    auto* en = app.add_subcommand("enumerate", "Enumerate the groups of order p^n into a catalog");
    en->add_option("p", p)->required();
    en->add_option("n", n)->required();
    en->add_option("-o,--out", out, "Catalog file (stdout when omitted)");
    en->add_flag("--long", allow_long, "Allow the long 2^7 run");
    en->add_flag("--no-orbits", no_orbits, "Skip automorphism orbit reduction (cross-check mode)");
    en->callback([&] { run = [&] { return cmd_enumerate(c, p, n, out, allow_long, no_orbits); }; });

    auto* tb = app.add_subcommand("tree-build", "Build an identification tree from a catalog file");
    tb->add_option("catalog", catalog)->required();
    tb->add_option("-o,--out", out)->required();
    tb->callback([&] { run = [&] { return cmd_tree_build(c, catalog, out); }; });

    auto* id = app.add_subcommand("identify", "Identify presentations with a tree");
    id->add_option("tree", tree)->required();
    id->add_option("presentation", input, "File, '-' for stdin, or an inline presentation")->default_val("-");
    id->add_option("--budget", budget, "Random isomorphism rounds before the exact fallback");
    id->callback([&] { run = [&] { return cmd_identify(c, tree, input, budget); }; });

    auto* sib = app.add_subcommand("siblings", "Sibling census of a catalog");
    sib->add_option("catalog", catalog)->required();
    sib->callback([&] { run = [&] { return cmd_siblings(c, catalog); }; });

    auto* tw = app.add_subcommand("twins", "Twin test over a catalog's sibling buckets or a family");
    tw->add_option("catalog", catalog);
    tw->add_option("--family", family);
    tw->add_option("--p", p);
    tw->callback([&] {
        run = [&] {
            if (catalog.empty() == family.empty()) throw InvalidInput("twins needs either a catalog or --family");
            return cmd_twins(c, catalog, family, p);
        };
    });

    auto* fp = app.add_subcommand("fingerprint", "Sibling fingerprint of a presentation");
    fp->add_option("presentation", input)->required();
    fp->callback([&] { run = [&] { return cmd_fingerprint(c, input); }; });

    auto* ct = app.add_subcommand("chartab", "Export the character table of a presentation");
    ct->add_option("presentation", input)->required();
    ct->add_option("-o,--out", out);
    ct->callback([&] { run = [&] { return cmd_chartab(c, input, out); }; });

    auto* br = app.add_subcommand("brauer", "Character table equivalence and Brauer pair test");
    br->add_option("a", a)->required();
    br->add_option("b", b)->required();
    br->callback([&] { run = [&] { return cmd_brauer(c, a, b); }; });

    auto* ic = app.add_subcommand("isoclinic", "Isoclinism test");
    ic->add_option("a", a)->required();
    ic->add_option("b", b)->required();
    ic->callback([&] { run = [&] { return cmd_isoclinic(c, a, b); }; });

    auto* fa = app.add_subcommand("family", "Print a member of an explicit presentation family");
    fa->add_option("family", family)->required();
    fa->add_option("p", p)->required();
    fa->add_option("parameter", param)->required();
    fa->callback([&] { run = [&] { return cmd_family(c, family, p, param); }; });

    auto* be = app.add_subcommand("bench", "Average identification time");
    be->add_option("tree", tree)->required();
    be->add_option("trials", trials)->default_val(1000);
    be->add_option("--catalog", catalog);
    be->callback([&] { run = [&] { return cmd_bench(c, tree, trials, catalog); }; });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }
    try {
        return run();
    } catch (const InvalidInput& e) {
        std::cerr << "pgf: invalid input: " << e.what() << '\n';
        return 2;
    } catch (const BoundExceeded& e) {
        std::cerr << "pgf: bound exceeded: " << e.what() << '\n';
        return 3;
    } catch (const IntegrityError& e) {
        std::cerr << "pgf: integrity error: " << e.what() << '\n';
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "pgf: error: " << e.what() << '\n';
        return 1;
    }
}
