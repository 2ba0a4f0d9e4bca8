#include <map>
#include <memory>
#include <mutex>

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "pgf/canon.hpp"
#include "pgf/catalog.hpp"
#include "pgf/chartab.hpp"
#include "pgf/errors.hpp"
#include "pgf/families.hpp"
#include "pgf/fingerprint.hpp"
#include "pgf/idtree.hpp"

namespace py = pybind11;
using namespace pgf;

namespace {

GroupPtr group(const std::string& text) { return make_group(PcPresentation::parse(text)); }

// Catalogs of orders p^2 .. p^(n-1), built once per (p, n) for naming subgroups and quotients.
const CatalogSet& smaller(int p, int n) {
    static std::mutex mu;
    static std::map<std::pair<int, int>, std::unique_ptr<CatalogSet>> cache;
    std::lock_guard lock(mu);
    auto& slot = cache[{p, n}];
    if (!slot) {
        slot = std::make_unique<CatalogSet>();
        for (int k = 2; k < n; ++k)
            if (enumeration_feasible(p, k)) slot->add(LoadedCatalog{p, k, enumerate_groups(p, k)});
    }
    return *slot;
}

IdContext ids_for(const GroupPtr& G) { return IdContext(&smaller(G->prime(), G->ngens())); }

}  // namespace

PYBIND11_MODULE(_pgf, m) {
    m.doc() = "p-group catalogs, sibling fingerprints, character tables and identification trees";

    auto base = py::register_exception<InvalidInput>(m, "InvalidInput", PyExc_ValueError);
    py::register_exception<BoundExceeded>(m, "BoundExceeded", PyExc_RuntimeError);
    py::register_exception<IntegrityError>(m, "IntegrityError", PyExc_RuntimeError);
    (void)base;

    m.def("normalize", [](const std::string& text) { return PcPresentation::parse(text).to_string(); },
          "Parse a presentation and print it back in normal form.");
    m.def("order", [](const std::string& text) { return PcPresentation::parse(text).order(); });
    m.def("is_consistent", [](const std::string& text) { return PcPresentation::parse(text).is_consistent(); });
    m.def("family", [](const std::string& name, int p, int parameter) {
        return paper_family({parse_family(name), p, parameter}).to_string();
    });
    m.def("family_parameters", [](const std::string& name, int p) { return family_parameters(parse_family(name), p); });

    m.def(
        "enumerate",
        [](int p, int n, bool allow_long) {
            EnumerateOptions opts;
            opts.allow_long = allow_long;
            std::vector<std::string> out;
            {
                py::gil_scoped_release release;
                for (const auto& e : enumerate_groups(p, n, opts)) out.push_back(e.presentation.to_string());
            }
            return out;
        },
        py::arg("p"), py::arg("n"), py::arg("allow_long") = false,
        "Presentations of all groups of order p^n, in catalog order (index = position + 1).");
    m.def("catalog_text", [](int p, int n) { return format_catalog(p, n, enumerate_groups(p, n)); });

    m.def("canonical_code", [](const std::string& text) { return canonical_code(group(text)).to_string(); });
    m.def("is_isomorphic", [](const std::string& a, const std::string& b) {
        return is_isomorphic(group(a), group(b)).has_value();
    });
    m.def("isoclinic", [](const std::string& a, const std::string& b) {
        return isoclinic(group(a), group(b)).has_value();
    });

    m.def("fingerprint_hash", [](const std::string& text) {
        const auto G = group(text);
        return sibling_fingerprint(G, ids_for(G)).hash();
    });
    m.def("are_siblings", [](const std::string& a, const std::string& b) {
        const auto G = group(a);
        return are_siblings(G, group(b), ids_for(G));
    });
    m.def(
        "sibling_census",
        [](int p, int n) {
            const auto entries = enumerate_groups(p, n);
            std::vector<std::vector<std::uint32_t>> out;
            for (const auto& b : sibling_census(entries, IdContext(&smaller(p, n)))) out.push_back(b.indices);
            return out;
        },
        "Buckets of catalog indices with equal sibling fingerprints.");

    m.def("character_table", [](const std::string& text) { return character_table(group(text)).export_text(); },
          "Character table in the pgf-chartab export format.");
    m.def("tables_equivalent", [](const std::string& a, const std::string& b) {
        return char_tables_equivalent(character_table(group(a)), character_table(group(b))).has_value();
    });
    m.def("brauer_pair", [](const std::string& a, const std::string& b) {
        return brauer_pair(character_table(group(a)), character_table(group(b))).has_value();
    });
    m.def("are_twins", [](const std::string& a, const std::string& b) {
        const auto G = group(a);
        return are_twins(G, group(b), ids_for(G));
    });

    m.def(
        "build_tree", [](int p, int n) { return serialize_tree(build_tree(p, n, enumerate_groups(p, n))); },
        "Identification tree for order p^n in the versioned tree file format.");
    m.def(
        "identify",
        [](const std::string& tree_text, const std::string& text, std::uint64_t seed) {
            IdentifyOptions opts;
            opts.seed = seed;
            return identify(parse_tree(tree_text), group(text), opts).index;
        },
        py::arg("tree"), py::arg("presentation"), py::arg("seed") = 1);
}
