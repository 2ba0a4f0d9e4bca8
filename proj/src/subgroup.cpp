#include "pgf/subgroup.hpp"

#include <algorithm>

#include "pgf/errors.hpp"

namespace pgf {

namespace {

std::vector<std::uint64_t> empty_bits(std::uint32_t order) { return std::vector<std::uint64_t>((order + 63) / 64, 0); }

void set_bit(std::vector<std::uint64_t>& bits, Elem x) { bits[x >> 6] |= (std::uint64_t{1} << (x & 63)); }

bool test_bit(const std::vector<std::uint64_t>& bits, Elem x) { return (bits[x >> 6] >> (x & 63)) & 1U; }

}  // namespace

Subgroup::Subgroup(GroupPtr parent, std::vector<std::uint64_t> bits) : parent_(std::move(parent)), bits_(std::move(bits)) {
    compute_igs();
}

Subgroup Subgroup::trivial(GroupPtr parent) {
    auto bits = empty_bits(parent->order());
    set_bit(bits, 0);
    return Subgroup(std::move(parent), std::move(bits));
}

Subgroup Subgroup::whole(GroupPtr parent) {
    auto bits = empty_bits(parent->order());
    for (Elem x = 0; x < parent->order(); ++x) set_bit(bits, x);
    return Subgroup(std::move(parent), std::move(bits));
}

Subgroup Subgroup::generated_by(GroupPtr parent, std::span<const Elem> gens) {
    const auto& G = *parent;
    auto bits = empty_bits(G.order());
    std::vector<Elem> members{0};
    set_bit(bits, 0);
    std::vector<Elem> uniq;
    for (Elem g : gens)
        if (g != 0 && std::find(uniq.begin(), uniq.end(), g) == uniq.end()) uniq.push_back(g);
    for (std::size_t head = 0; head < members.size(); ++head)
        for (Elem g : uniq) {
            const Elem y = G.mul(members[head], g);
            if (!test_bit(bits, y)) {
                set_bit(bits, y);
                members.push_back(y);
            }
        }
    return Subgroup(std::move(parent), std::move(bits));
}

Subgroup Subgroup::from_members(GroupPtr parent, std::span<const Elem> members) {
    auto bits = empty_bits(parent->order());
    for (Elem x : members) set_bit(bits, x);
    set_bit(bits, 0);
    return Subgroup(std::move(parent), std::move(bits));
}

void Subgroup::compute_igs() {
    const auto& G = *parent_;
    const int n = G.ngens();
    std::vector<Elem> members;
    for (std::size_t w = 0; w < bits_.size(); ++w) {
        std::uint64_t word = bits_[w];
        while (word) {
            const int b = __builtin_ctzll(word);
            members.push_back(static_cast<Elem>(w * 64 + static_cast<std::size_t>(b)));
            word &= word - 1;
        }
    }
    order_ = static_cast<std::uint32_t>(members.size());
    std::vector<char> present(static_cast<std::size_t>(n), 0);
    for (Elem x : members) {
        const int d = G.depth(x);
        if (d < n) present[static_cast<std::size_t>(d)] = 1;
    }
    igs_.clear();
    for (int d = 0; d < n; ++d) {
        if (!present[static_cast<std::size_t>(d)]) continue;
        for (Elem x : members) {
            if (G.depth(x) != d || G.exponent_at(x, d) != 1) continue;
            bool clean = true;
            for (int e = d + 1; e < n && clean; ++e)
                if (present[static_cast<std::size_t>(e)] && G.exponent_at(x, e) != 0) clean = false;
            if (clean) {
                igs_.push_back(x);
                break;
            }
        }
    }
}

bool Subgroup::contains_by_sifting(Elem x) const {
    const auto& G = *parent_;
    std::size_t t = 0;
    for (int d = 0; d < G.ngens(); ++d) {
        while (t < igs_.size() && G.depth(igs_[t]) < d) ++t;
        const int c = G.exponent_at(x, d);
        if (c == 0) continue;
        if (t >= igs_.size() || G.depth(igs_[t]) != d) return false;
        x = G.mul(G.pow(igs_[t], -c), x);
    }
    return x == 0;
}

Exponents Subgroup::sift_exponents(Elem x) const {
    const auto& G = *parent_;
    Exponents e(igs_.size(), 0);
    for (std::size_t t = 0; t < igs_.size(); ++t) {
        const int c = G.exponent_at(x, G.depth(igs_[t]));
        e[t] = c;
        if (c) x = G.mul(G.pow(igs_[t], -c), x);
    }
    if (x != 0) throw InvalidInput("sift_exponents: element is not a member of the subgroup");
    return e;
}

std::optional<Elem> Subgroup::at_depth(int d) const {
    for (Elem u : igs_)
        if (parent_->depth(u) == d) return u;
    return std::nullopt;
}

std::vector<Elem> Subgroup::elements() const {
    std::vector<Elem> out;
    out.reserve(order_);
    for (std::size_t w = 0; w < bits_.size(); ++w) {
        std::uint64_t word = bits_[w];
        while (word) {
            out.push_back(static_cast<Elem>(w * 64 + static_cast<std::size_t>(__builtin_ctzll(word))));
            word &= word - 1;
        }
    }
    return out;
}

bool Subgroup::is_subgroup_of(const Subgroup& other) const {
    for (Elem u : igs_)
        if (!other.contains(u)) return false;
    return true;
}

bool Subgroup::normalized_by(Elem g) const {
    for (Elem u : igs_)
        if (!contains(parent_->conj(u, g))) return false;
    return true;
}

bool Subgroup::is_normal() const {
    for (int k = 0; k < parent_->ngens(); ++k)
        if (!normalized_by(parent_->generator(k))) return false;
    return true;
}

Subgroup Subgroup::conjugate(Elem g) const {
    auto bits = empty_bits(parent_->order());
    for (Elem x : elements()) set_bit(bits, parent_->conj(x, g));
    return Subgroup(parent_, std::move(bits));
}

PcPresentation Subgroup::induced_presentation() const {
    const auto& G = *parent_;
    const int m = static_cast<int>(igs_.size());
    PcPresentation pres(G.prime(), m);
    for (int i = 0; i < m; ++i) {
        const auto ui = igs_[static_cast<std::size_t>(i)];
        const Elem pw = G.pow(ui, G.prime());
        if (pw) pres.set_power(i, sift_exponents(pw));
        for (int j = i + 1; j < m; ++j) {
            const Elem c = G.comm(igs_[static_cast<std::size_t>(j)], ui);
            if (c) pres.set_commutator(j, i, sift_exponents(c));
        }
    }
    return pres;
}

}  // namespace pgf
