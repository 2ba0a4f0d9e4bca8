#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pgf/group.hpp"
#include "pgf/presentation.hpp"

namespace pgf {

/// Largest order accepted by the canonical-form and isomorphism routines.
inline constexpr std::uint32_t kCanonMaxOrder = 3125;

/// Isomorphism-invariant serialization of a weighted pc-presentation.
///
/// Layout: version, p, n, number of weight layers, layer sizes, then the
/// exponent vectors of all powers (g_i^p, entries after i) and commutators
/// ([g_j, g_i] for j > i, entries after j).
struct CanonicalCode {
    static constexpr std::uint32_t kVersion = 1;

    std::vector<std::uint32_t> bytes;
    std::uint32_t order = 1;

    /// "v1 <len> <b_0> ... <b_len-1>"
    std::string to_string() const;
    static CanonicalCode parse(std::string_view text);
    /// Rebuilds the presentation encoded in the code.
    PcPresentation presentation() const;
    std::uint64_t hash() const noexcept;

    bool operator==(const CanonicalCode& o) const { return bytes == o.bytes; }
    std::strong_ordering operator<=>(const CanonicalCode& o) const {
        if (auto c = order <=> o.order; c != 0) return c;
        return bytes <=> o.bytes;
    }
};

struct CanonicalForm {
    CanonicalCode code;
    /// Presentation encoded by code, on the canonical generating tuple.
    PcPresentation presentation;
    /// Canonical minimal generating tuple of G.
    std::vector<Elem> tuple;
    /// Images of every element of the canonical pc-sequence, i.e. the
    /// isomorphism presentation() -> G on generators.
    std::vector<Elem> pc_sequence;
    /// Automorphisms met during the search, as images of the pc generators of G.
    /// They generate a subgroup of Aut(G), usually all of it.
    std::vector<std::vector<Elem>> automorphisms;
    std::uint64_t leaves = 0;
};

struct CanonOptions {
    std::uint32_t max_order = kCanonMaxOrder;
    /// Keep at most this many automorphisms for orbit pruning.
    std::size_t max_stored_automorphisms = 256;
};

CanonicalForm canonical_form(const GroupPtr& G, const CanonOptions& opts = {});
CanonicalCode canonical_code(const GroupPtr& G, const CanonOptions& opts = {});
CanonicalCode canonical_code(const PcPresentation& pres, const CanonOptions& opts = {});

/// Weighted presentation of G along the lower exponent-p central series,
/// built from a generating tuple (images of the generators of G/Phi(G)).
/// Also returns the pc-sequence in G through `sequence` when non-null.
PcPresentation weighted_presentation(const GroupPtr& G, const std::vector<Elem>& tuple,
                                     std::vector<Elem>* sequence = nullptr,
                                     std::vector<int>* layer_sizes = nullptr);

/// Map phi given by images of the pc generators of G in H. Returns the full
/// element map if it is an isomorphism.
std::optional<std::vector<Elem>> extend_to_isomorphism(const GroupPtr& G, const GroupPtr& H,
                                                       const std::vector<Elem>& images_of_generators);

/// An isomorphism G -> H as images of the pc generators of G, or nothing.
std::optional<std::vector<Elem>> is_isomorphic(const GroupPtr& G, const GroupPtr& H, const CanonOptions& opts = {});

/// Code of the weighted presentation over a random generating tuple, as a
/// decimal integer.
std::string random_pc_code(const GroupPtr& G, std::uint64_t seed);

struct RandomIsoVerdict {
    bool isomorphic = false;
    /// Round in which codes collided, or 0 when the fallback decided.
    int decided_in_round = 0;
};
RandomIsoVerdict random_iso_test(const GroupPtr& G, const GroupPtr& H, int budget, std::uint64_t seed = 1);

struct AutomorphismOptions {
    std::uint64_t max_nodes = 5'000'000;
    std::uint64_t max_automorphisms = 200'000;
};

/// |Aut(G)| by backtracking, or nothing when the budget is exceeded.
std::optional<std::uint64_t> automorphism_order(const GroupPtr& G, const AutomorphismOptions& opts = {});
/// Every automorphism as a permutation of the elements, or nothing over budget.
std::optional<std::vector<std::vector<Elem>>> automorphisms(const GroupPtr& G, const AutomorphismOptions& opts = {});

/// Whether Out(G) and Out(H) are isomorphic; nothing when over budget.
std::optional<bool> outer_equivalent(const GroupPtr& G, const GroupPtr& H, const AutomorphismOptions& opts = {});

/// Abstract group given by a multiplication table on 0..m-1 with identity 0.
struct TableGroup {
    std::uint32_t order = 1;
    std::vector<std::uint32_t> table;
    std::uint32_t mul(std::uint32_t a, std::uint32_t b) const { return table[a * order + b]; }
};
bool table_groups_isomorphic(const TableGroup& A, const TableGroup& B);

struct IsoclinismWitness {
    /// Quotients G/Z(G) and H/Z(H) on which alpha acts.
    GroupPtr central_quotient_g, central_quotient_h;
    /// Images of the pc generators of G/Z(G) in H/Z(H).
    std::vector<Elem> alpha;
    /// Generators of [G,G] (elements of G) and their images in [H,H] (elements of H).
    std::vector<Elem> derived_generators;
    std::vector<Elem> beta;
};

std::optional<IsoclinismWitness> isoclinic(const GroupPtr& G, const GroupPtr& H);

}  // namespace pgf
