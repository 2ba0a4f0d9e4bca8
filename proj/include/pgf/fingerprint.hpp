#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "pgf/canon.hpp"
#include "pgf/catalog.hpp"
#include "pgf/group.hpp"
#include "pgf/subgroup.hpp"

namespace pgf {

/// Isomorphism-type identifier: catalog (order, index) when the order is
/// covered by the loaded catalogs, otherwise the canonical code.
struct Identifier {
    std::uint32_t order = 1;
    std::uint32_t index = 0;  ///< 0 when identified by code
    CanonicalCode code;       ///< empty when identified by catalog index

    bool by_catalog() const { return index != 0; }
    /// "(16,3)" or "[v1 ...]"
    std::string to_string() const;
    void append_to(std::vector<std::uint32_t>& out) const;

    bool operator==(const Identifier& o) const {
        return order == o.order && index == o.index && code.bytes == o.code.bytes;
    }
    std::strong_ordering operator<=>(const Identifier& o) const {
        if (auto c = order <=> o.order; c != 0) return c;
        // catalog ids sort before code ids of the same order
        if (auto c = (index == 0) <=> (o.index == 0); c != 0) return c;
        if (auto c = index <=> o.index; c != 0) return c;
        return code.bytes <=> o.code.bytes;
    }
};

/// Identification against a set of catalogs. Orders 1 and p are always
/// identified by catalog index (there is one group each).
class IdContext {
public:
    IdContext() = default;
    explicit IdContext(const CatalogSet* catalogs) : catalogs_(catalogs) {}

    Identifier identify(const GroupPtr& G) const;
    Identifier identify(const Subgroup& U) const;
    Identifier identify_quotient(const GroupPtr& G, const Subgroup& N) const;
    const CatalogSet* catalogs() const { return catalogs_; }

private:
    const CatalogSet* catalogs_ = nullptr;
};

struct SubgroupFingerprint {
    /// Sorted (class length, identifier) pairs, one per class of proper subgroups.
    std::vector<std::pair<std::uint32_t, Identifier>> entries;
    bool operator==(const SubgroupFingerprint&) const = default;
};

struct FactorFingerprint {
    /// Sorted identifiers of G/N over the nontrivial normal subgroups N.
    std::vector<Identifier> entries;
    bool operator==(const FactorFingerprint&) const = default;
};

struct SiblingFingerprint {
    SubgroupFingerprint sf;
    FactorFingerprint ff;
    Identifier frattini_id;
    /// Proper terms (the whole group excluded), in series order.
    std::vector<Identifier> upper_series_ids;
    std::vector<Identifier> lower_series_ids;

    bool operator==(const SiblingFingerprint&) const = default;
    std::vector<std::uint32_t> serialize() const;
    std::uint64_t hash() const;
};

SubgroupFingerprint subgroup_fingerprint(const GroupPtr& G, const IdContext& ids);
FactorFingerprint factor_fingerprint(const GroupPtr& G, const IdContext& ids);
SiblingFingerprint sibling_fingerprint(const GroupPtr& G, const IdContext& ids);

/// SS(G) = SS(H) and G not isomorphic to H.
bool are_siblings(const GroupPtr& G, const GroupPtr& H, const IdContext& ids);

struct SiblingBucket {
    std::uint32_t order = 0;
    std::vector<std::uint32_t> indices;  ///< catalog indices, ascending
};

struct CensusOptions {
    /// Called after each group's fingerprint (progress reporting); may be empty.
    std::function<void(std::size_t done, std::size_t total)> progress;
    /// Worker threads for the fingerprints; the result does not depend on it.
    unsigned threads = 1;
};

/// Buckets of size >= 2 of the catalog grouped by SS, in order of least member.
std::vector<SiblingBucket> sibling_census(const std::vector<CatalogEntry>& entries, const IdContext& ids,
                                          const CensusOptions& opts = {});

/// One line "order size id_1 id_2 ..." per bucket and "pairs=a triples=b quadruples=c".
std::string format_census(const std::vector<SiblingBucket>& buckets);

}  // namespace pgf
