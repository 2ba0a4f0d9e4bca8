#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "pgf/canon.hpp"
#include "pgf/presentation.hpp"

namespace pgf {

struct CatalogEntry {
    std::uint32_t order = 1;
    /// 1-based position in ascending code order.
    std::uint32_t index = 0;
    /// The canonical presentation encoded by `code`.
    PcPresentation presentation;
    CanonicalCode code;
};

struct EnumerateOptions {
    /// Reduce extension classes by the automorphisms of the quotient. Off gives
    /// a slower run over every extension class (used as a cross-check).
    bool orbit_reduction = true;
    /// Visit parents and extension classes in reverse order.
    bool reverse_order = false;
    /// Also allow (p, n) pairs outside the default feasibility set.
    bool allow_long = false;
};

/// Whether enumerate_groups accepts (p, n): n <= 4 for p in {2, 3, 5, 7},
/// n <= 6 for p = 2, and with allow_long also n = 7 for p = 2.
bool enumeration_feasible(int p, int n, bool allow_long = false);

/// One entry per isomorphism type of order p^n, sorted by code.
/// Throws BoundExceeded for infeasible (p, n).
std::vector<CatalogEntry> enumerate_groups(int p, int n, const EnumerateOptions& opts = {});

/// Extension classes of a group by a central subgroup of order p: the
/// presentations of the central extensions E with E/Z = Q for orbit
/// representatives of nonzero classes, plus Q x C_p. Exposed for testing.
std::vector<PcPresentation> central_extensions(const PcPresentation& Q, const EnumerateOptions& opts = {});

/// "pgf-catalog v1 p n count", then one "index<TAB>code<TAB>presentation" line per entry.
std::string format_catalog(int p, int n, const std::vector<CatalogEntry>& entries);
void save_catalog(const std::vector<CatalogEntry>& entries, int p, int n, const std::filesystem::path& path);

struct LoadedCatalog {
    int p = 0;
    int n = 0;
    std::vector<CatalogEntry> entries;
};
/// Parses and re-verifies a catalog. An empty file yields an empty catalog.
/// Throws InvalidInput for malformed text and IntegrityError for failed checks.
LoadedCatalog parse_catalog(const std::string& text, bool recompute_codes = false);
LoadedCatalog load_catalog(const std::filesystem::path& path, bool recompute_codes = false);

/// Catalogs of several orders with lookup by code.
class CatalogSet {
public:
    void add(const LoadedCatalog& c);
    bool has_order(std::uint32_t order) const;
    /// 1-based index of the group with this code, if its order is covered.
    std::optional<std::uint32_t> index_of(const CanonicalCode& code) const;
    const std::vector<CatalogEntry>& entries(std::uint32_t order) const;
    std::vector<std::uint32_t> orders() const;

    /// Loads or builds (and then saves) catalogs for the given (p, n) pairs in `dir`.
    static CatalogSet from_directory(const std::filesystem::path& dir, const std::vector<std::pair<int, int>>& wanted,
                                     bool build_missing = true);

private:
    std::map<std::uint32_t, std::vector<CatalogEntry>> by_order_;
    std::unordered_map<std::uint64_t, std::vector<std::pair<std::uint32_t, std::uint32_t>>> by_hash_;
};

std::filesystem::path catalog_file_name(int p, int n);

}  // namespace pgf
