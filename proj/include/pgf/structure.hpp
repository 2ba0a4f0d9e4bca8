#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

#include "pgf/group.hpp"
#include "pgf/subgroup.hpp"

namespace pgf {

enum class SeriesKind { derived, lower_central, upper_central, lower_exponent_p, frattini };

std::string_view to_string(SeriesKind kind);

struct SeriesData {
    SeriesKind kind;
    /// Descending for all kinds except upper_central, which ascends from the trivial group.
    std::vector<Subgroup> terms;
};

/// Conjugacy class of proper subgroups with its length.
struct SubgroupClass {
    Subgroup representative;  ///< least conjugate in Subgroup order
    std::uint32_t length = 0;
};

struct SubgroupOptions {
    /// Largest group order for which all subgroups are enumerated.
    std::uint32_t max_order = 3125;
};

/// Partition of G into conjugacy classes (same data as PcGroup::classes()).
std::vector<ConjugacyClassInfo> conjugacy_classes(const GroupPtr& G);
std::vector<std::uint32_t> element_order_multiset(const GroupPtr& G);

Subgroup normal_closure(const GroupPtr& G, std::span<const Elem> gens);
Subgroup center(const GroupPtr& G);
Subgroup derived_subgroup(const GroupPtr& G);
Subgroup frattini_subgroup(const GroupPtr& G);
/// Commutator subgroup [A, B] of two normal subgroups.
Subgroup commutator_subgroup(const Subgroup& A, const Subgroup& B);

SeriesData series(const GroupPtr& G, SeriesKind kind);

/// Pc generators of G that are independent modulo Phi(G), in order.
std::vector<Elem> minimal_generating_set(const GroupPtr& G);
/// log_p |G / Phi(G)|.
int rank(const GroupPtr& G);
/// Invariant factors of G/[G,G], ascending, e.g. {p, p^2}. Empty for the trivial group.
std::vector<std::uint32_t> abelian_invariants(const GroupPtr& G);
/// Abelian invariants of every term of the derived series (G, G', G'', ...), last term trivial excluded.
std::vector<std::vector<std::uint32_t>> derived_series_abelian_invariants(const GroupPtr& G);

/// Group object for a subgroup, on its induced presentation.
GroupPtr subgroup_as_group(const Subgroup& U);
/// Presentation of G/N on the generators outside the leading depths of N.
PcPresentation quotient(const GroupPtr& G, const Subgroup& N);
/// Image of x in the presentation returned by quotient().
Exponents quotient_image(const Subgroup& N, Elem x);

/// Nontrivial normal subgroups, including G itself; sorted by Subgroup order.
std::vector<Subgroup> normal_subgroups(const GroupPtr& G);
/// Index-p subgroups, i.e. those containing Phi(G).
std::vector<Subgroup> maximal_subgroups(const GroupPtr& G);
/// Nontrivial cyclic subgroups of the center.
std::vector<Subgroup> central_cyclic_subgroups(const GroupPtr& G);

/// Every subgroup of G (including 1 and G), by cyclic extension; sorted.
std::vector<Subgroup> all_subgroups(const GroupPtr& G, const SubgroupOptions& opts = {});
/// Conjugacy classes of proper subgroups (trivial subgroup included), sorted by
/// (order, length, representative).
std::vector<SubgroupClass> subgroup_conjugacy_classes(const GroupPtr& G, const SubgroupOptions& opts = {});

}  // namespace pgf
