#include "pgf/group.hpp"

#include <algorithm>
#include <numeric>
#include <tuple>

#include "pgf/errors.hpp"

namespace pgf {

std::shared_ptr<const PcGroup> PcGroup::create(const PcPresentation& pres) {
    if (pres.order() > kMaxTableOrder)
        throw BoundExceeded("group order " + std::to_string(pres.order()) + " exceeds table bound " +
                            std::to_string(kMaxTableOrder));
    if (!pres.is_consistent()) throw InvalidInput("inconsistent pc-presentation: " + pres.to_string());
    return std::make_shared<const PcGroup>(pres);
}

PcGroup::PcGroup(const PcPresentation& pres) : pres_(pres) {
    const int n = pres.ngens();
    const auto p = static_cast<std::uint32_t>(pres.prime());
    order_ = pres.order();
    if (order_ > kMaxTableOrder) throw BoundExceeded("group order exceeds table bound");
    place_.assign(static_cast<std::size_t>(n), 1);
    for (int i = n - 2; i >= 0; --i) place_[static_cast<std::size_t>(i)] = place_[static_cast<std::size_t>(i) + 1] * p;

    // Right multiplication by each generator, via collection.
    std::vector<Elem> right(static_cast<std::size_t>(order_) * static_cast<std::size_t>(n));
    for (Elem x = 0; x < order_; ++x) {
        PcPresentation::Word w{};
        for (int i = 0; i < n; ++i) w[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>(exponent_at(x, i));
        for (int k = 0; k < n; ++k) {
            PcPresentation::Word y = w;
            pres_.multiply_generator_word(y, k);
            Elem e = 0;
            for (int i = 0; i < n; ++i) e += y[static_cast<std::size_t>(i)] * place_[static_cast<std::size_t>(i)];
            right[static_cast<std::size_t>(x) * static_cast<std::size_t>(n) + static_cast<std::size_t>(k)] = e;
        }
    }
    // x * y = (x * y') * g_m where g_m is the last generator occurring in y and
    // y' has that exponent lowered by one; y' < y so rows fill in increasing order.
    table_.resize(static_cast<std::size_t>(order_) * order_);
    std::vector<int> last(order_, -1);
    for (Elem y = 1; y < order_; ++y)
        for (int i = n - 1; i >= 0; --i)
            if (exponent_at(y, i)) {
                last[y] = i;
                break;
            }
    for (Elem x = 0; x < order_; ++x) {
        auto* row = &table_[static_cast<std::size_t>(x) * order_];
        row[0] = static_cast<std::uint16_t>(x);
        for (Elem y = 1; y < order_; ++y) {
            const int m = last[y];
            const Elem prev = y - place_[static_cast<std::size_t>(m)];
            row[y] = static_cast<std::uint16_t>(right[static_cast<std::size_t>(row[prev]) * static_cast<std::size_t>(n) +
                                                      static_cast<std::size_t>(m)]);
        }
    }
    inverse_.assign(order_, 0);
    for (Elem x = 0; x < order_; ++x) {
        const auto* row = &table_[static_cast<std::size_t>(x) * order_];
        for (Elem y = 0; y < order_; ++y)
            if (row[y] == 0) {
                inverse_[x] = y;
                break;
            }
    }
    orders_.assign(order_, 1);
    for (Elem x = 1; x < order_; ++x) {
        std::uint32_t o = 1;
        Elem cur = x;
        while (cur != 0) {
            cur = mul(cur, x);
            ++o;
        }
        orders_[x] = o;
        exponent_ = std::max(exponent_, o);
    }
}

Elem PcGroup::pow(Elem a, long long e) const noexcept {
    const long long o = orders_[a];
    e %= o;
    if (e < 0) e += o;
    Elem result = 0;
    Elem base = a;
    while (e > 0) {
        if (e & 1) result = mul(result, base);
        base = mul(base, base);
        e >>= 1;
    }
    return result;
}

Exponents PcGroup::exponents(Elem x) const {
    Exponents e(static_cast<std::size_t>(ngens()));
    for (int i = 0; i < ngens(); ++i) e[static_cast<std::size_t>(i)] = exponent_at(x, i);
    return e;
}

Elem PcGroup::element(const Exponents& e) const {
    if (static_cast<int>(e.size()) != ngens()) throw InvalidInput("element: exponent vector has wrong length");
    Elem x = 0;
    for (int i = 0; i < ngens(); ++i) {
        const int v = e[static_cast<std::size_t>(i)];
        if (v < 0 || v >= prime()) throw InvalidInput("element: exponent out of range");
        x += static_cast<Elem>(v) * place_[static_cast<std::size_t>(i)];
    }
    return x;
}

int PcGroup::depth(Elem x) const noexcept {
    for (int i = 0; i < ngens(); ++i)
        if (exponent_at(x, i)) return i;
    return ngens();
}

bool PcGroup::is_abelian() const noexcept {
    for (int i = 0; i < ngens(); ++i)
        for (int j = 0; j < i; ++j)
            if (mul(generator(i), generator(j)) != mul(generator(j), generator(i))) return false;
    return true;
}

void PcGroup::compute_classes() const {
    std::vector<std::uint32_t> raw(order_, UINT32_MAX);
    std::vector<std::vector<Elem>> members;
    for (Elem x = 0; x < order_; ++x) {
        if (raw[x] != UINT32_MAX) continue;
        const auto id = static_cast<std::uint32_t>(members.size());
        std::vector<Elem> orbit{x};
        raw[x] = id;
        for (std::size_t head = 0; head < orbit.size(); ++head)
            for (int k = 0; k < ngens(); ++k) {
                const Elem y = conj(orbit[head], generator(k));
                if (raw[y] == UINT32_MAX) {
                    raw[y] = id;
                    orbit.push_back(y);
                }
            }
        std::sort(orbit.begin(), orbit.end());
        members.push_back(std::move(orbit));
    }
    std::vector<std::uint32_t> perm(members.size());
    std::iota(perm.begin(), perm.end(), 0U);
    auto key = [&](std::uint32_t c) {
        return std::tuple(members[c].size(), orders_[members[c].front()], members[c].front());
    };
    std::sort(perm.begin(), perm.end(), [&](auto a, auto b) { return key(a) < key(b); });
    std::vector<std::uint32_t> rank(members.size());
    for (std::uint32_t i = 0; i < perm.size(); ++i) rank[perm[i]] = i;
    class_of_.assign(order_, 0);
    for (Elem x = 0; x < order_; ++x) class_of_[x] = rank[raw[x]];
    classes_.clear();
    class_members_.clear();
    for (auto c : perm) {
        classes_.push_back({members[c].front(), static_cast<std::uint32_t>(members[c].size()), orders_[members[c].front()]});
        class_members_.push_back(std::move(members[c]));
    }
}

const std::vector<ConjugacyClassInfo>& PcGroup::classes() const {
    std::call_once(classes_once_, [this] { compute_classes(); });
    return classes_;
}

std::uint32_t PcGroup::class_of(Elem x) const {
    classes();
    return class_of_[x];
}

const std::vector<Elem>& PcGroup::class_members(std::uint32_t c) const {
    classes();
    return class_members_[c];
}

}  // namespace pgf
