#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "pgf/group.hpp"

namespace pgf {

/// Subgroup of a PcGroup, held as its canonical induced generating sequence plus a
/// membership bitmap. The igs has strictly increasing depths, leading exponents 1,
/// and zero exponents at the leading depths of the other members, so two Subgroup
/// values are equal exactly when they have the same elements.
class Subgroup {
public:
    Subgroup() = default;

    static Subgroup trivial(GroupPtr parent);
    static Subgroup whole(GroupPtr parent);
    static Subgroup generated_by(GroupPtr parent, std::span<const Elem> gens);
    /// `members` must already be a subgroup (closed under multiplication).
    static Subgroup from_members(GroupPtr parent, std::span<const Elem> members);

    const GroupPtr& parent() const noexcept { return parent_; }
    const std::vector<Elem>& igs() const noexcept { return igs_; }
    std::uint32_t order() const noexcept { return order_; }
    /// log_p of the order.
    int length() const noexcept { return static_cast<int>(igs_.size()); }

    bool contains(Elem x) const noexcept { return (bits_[x >> 6] >> (x & 63)) & 1U; }
    /// Membership by sifting through the igs; agrees with contains().
    bool contains_by_sifting(Elem x) const;
    /// igs element with leading position d, if any.
    std::optional<Elem> at_depth(int d) const;
    std::vector<Elem> elements() const;

    bool is_subgroup_of(const Subgroup& other) const;
    bool is_normal() const;
    bool normalized_by(Elem g) const;
    Subgroup conjugate(Elem g) const;

    /// pc-presentation on the igs (relations re-expressed by sifting).
    PcPresentation induced_presentation() const;
    /// Exponents of a member relative to the igs.
    Exponents sift_exponents(Elem x) const;

    bool operator==(const Subgroup& o) const noexcept { return order_ == o.order_ && igs_ == o.igs_; }
    /// Order, then lexicographic igs.
    bool operator<(const Subgroup& o) const noexcept {
        return order_ != o.order_ ? order_ < o.order_ : igs_ < o.igs_;
    }

private:
    Subgroup(GroupPtr parent, std::vector<std::uint64_t> bits);
    void compute_igs();

    GroupPtr parent_;
    std::vector<std::uint64_t> bits_;
    std::vector<Elem> igs_;
    std::uint32_t order_ = 0;
};

}  // namespace pgf
