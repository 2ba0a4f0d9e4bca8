#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace pgf {

/// Exponent vector of a normal-form element g_1^{e_1} ... g_n^{e_n}, each e_i in [0, p).
using Exponents = std::vector<int>;

inline constexpr int kMaxGens = 16;

bool is_prime(int p);

/// Consistent power-commutator presentation of a finite p-group of order p^n.
///
/// Generators are 0-based internally. The power relation of g_i stores g_i^p as an
/// exponent vector supported on generators with index > i; the commutator relation
/// for j > i stores [g_j, g_i] = g_j^-1 g_i^-1 g_j g_i supported on indices > j.
/// Unset relations are trivial. Setters reject words that violate this shape.
class PcPresentation {
public:
    using Word = std::array<std::uint8_t, kMaxGens>;

    PcPresentation() : PcPresentation(2, 0) {}
    PcPresentation(int prime, int ngens);

    int prime() const noexcept { return p_; }
    int ngens() const noexcept { return n_; }
    /// p^n; throws BoundExceeded when it does not fit in 32 bits.
    std::uint32_t order() const;

    PcPresentation& set_power(int i, const Exponents& w);
    PcPresentation& set_commutator(int j, int i, const Exponents& w);
    Exponents power(int i) const;
    Exponents commutator(int j, int i) const;

    bool is_trivial_power(int i) const;
    bool is_trivial_commutator(int j, int i) const;

    Exponents identity() const { return Exponents(static_cast<std::size_t>(n_), 0); }
    Exponents generator(int i) const;

    /// Normal form of x * g_k.
    Exponents multiply_generator(const Exponents& x, int k) const;
    Exponents multiply(const Exponents& x, const Exponents& y) const;
    Exponents power_of(const Exponents& x, long long e) const;
    Exponents inverse(const Exponents& x) const;

    /// Collects a word of letters +(i+1) for g_i and -(i+1) for g_i^-1.
    Exponents collect(std::span<const int> letters) const;

    /// Full overlap test: g_k(g_j g_i) = (g_k g_j)g_i for k>j>i, g_j^p g_i,
    /// g_j g_i^p (j>i) and g_i^{p+1}.
    bool is_consistent() const;
    /// Both sides of every overlap test, in a fixed order; equal pairs iff consistent.
    std::vector<std::pair<Exponents, Exponents>> overlap_results() const;

    /// Record in the one-line text format (see docs/FORMATS.md).
    std::string to_string() const;
    static PcPresentation parse(std::string_view text);

    /// Flat integer serialization: p, n, power vectors, then commutator vectors (j>i, i-major).
    std::vector<int> serialize() const;

    bool operator==(const PcPresentation& other) const = default;

    // Internal fast path used by group construction.
    bool visit_overlaps(const std::function<bool(const Word&, const Word&)>& visit) const;
    void multiply_generator_word(Word& x, int k) const;
    void multiply_word(Word& x, const Word& y) const;
    Word to_word(const Exponents& e) const;
    Exponents from_word(const Word& w) const;

private:
    Word& comm_ref(int j, int i) { return comms_[static_cast<std::size_t>(j * kMaxGens + i)]; }
    const Word& comm_ref(int j, int i) const { return comms_[static_cast<std::size_t>(j * kMaxGens + i)]; }
    void check_index(int i) const;
    void check_word(const Exponents& w, int after) const;

    int p_;
    int n_;
    std::vector<Word> powers_;
    std::vector<Word> comms_;
};

}  // namespace pgf
