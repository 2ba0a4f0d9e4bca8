#pragma once

#include <cstdint>
#include <memory>
#include <mutex>
#include <vector>

#include "pgf/presentation.hpp"

namespace pgf {

/// Element of a PcGroup: the index sum e_i p^{n-1-i}, so index order is lexicographic
/// order of exponent vectors and 0 is the identity.
using Elem = std::uint32_t;

/// Largest group order for which multiplication tables are built.
inline constexpr std::uint32_t kMaxTableOrder = 4096;

struct ConjugacyClassInfo {
    Elem representative = 0;  ///< lexicographically least member
    std::uint32_t size = 0;
    std::uint32_t element_order = 0;

    bool operator==(const ConjugacyClassInfo&) const = default;
};

/// A finite p-group given by a consistent pc-presentation, with a full multiplication
/// table. Immutable after construction; share it through GroupPtr.
class PcGroup {
public:
    /// Throws InvalidInput if the presentation is inconsistent and BoundExceeded if
    /// the order is above kMaxTableOrder.
    static std::shared_ptr<const PcGroup> create(const PcPresentation& pres);

    const PcPresentation& presentation() const noexcept { return pres_; }
    int prime() const noexcept { return pres_.prime(); }
    int ngens() const noexcept { return pres_.ngens(); }
    std::uint32_t order() const noexcept { return order_; }

    Elem mul(Elem a, Elem b) const noexcept { return table_[static_cast<std::size_t>(a) * order_ + b]; }
    Elem inv(Elem a) const noexcept { return inverse_[a]; }
    /// g^-1 x g
    Elem conj(Elem x, Elem g) const noexcept { return mul(inv(g), mul(x, g)); }
    /// a^-1 b^-1 a b
    Elem comm(Elem a, Elem b) const noexcept { return mul(inv(mul(b, a)), mul(a, b)); }
    Elem pow(Elem a, long long e) const noexcept;

    Elem generator(int i) const noexcept { return place_[static_cast<std::size_t>(i)]; }
    Exponents exponents(Elem x) const;
    Elem element(const Exponents& e) const;
    int exponent_at(Elem x, int i) const noexcept {
        return static_cast<int>((x / place_[static_cast<std::size_t>(i)]) % static_cast<std::uint32_t>(prime()));
    }
    /// Index of the first nonzero exponent, or ngens() for the identity.
    int depth(Elem x) const noexcept;

    std::uint32_t element_order(Elem x) const noexcept { return orders_[x]; }
    std::uint32_t exponent() const noexcept { return exponent_; }
    bool is_abelian() const noexcept;

    /// Conjugacy classes sorted by (size, element order, representative).
    const std::vector<ConjugacyClassInfo>& classes() const;
    std::uint32_t class_of(Elem x) const;
    const std::vector<Elem>& class_members(std::uint32_t c) const;

    explicit PcGroup(const PcPresentation& pres);

private:
    void compute_classes() const;

    PcPresentation pres_;
    std::uint32_t order_ = 1;
    std::uint32_t exponent_ = 1;
    std::vector<std::uint32_t> place_;
    std::vector<std::uint16_t> table_;
    std::vector<Elem> inverse_;
    std::vector<std::uint32_t> orders_;

    mutable std::once_flag classes_once_;
    mutable std::vector<ConjugacyClassInfo> classes_;
    mutable std::vector<std::uint32_t> class_of_;
    mutable std::vector<std::vector<Elem>> class_members_;
};

using GroupPtr = std::shared_ptr<const PcGroup>;

/// Convenience: parse-free construction from a presentation.
inline GroupPtr make_group(const PcPresentation& pres) { return PcGroup::create(pres); }

}  // namespace pgf
