#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pgf/fingerprint.hpp"
#include "pgf/group.hpp"

namespace pgf {

/// Element of Z[zeta_m], zeta_m = exp(2 pi i / m), stored as the remainder
/// modulo the m-th cyclotomic polynomial: coefficients of zeta^0 .. zeta^(m-1)
/// with every entry of degree >= phi(m) zero.
struct CyclotomicValue {
    std::uint32_t m = 1;
    std::vector<long long> coefficients;

    /// sum_t mult[t] zeta^t, reduced. mult has length m.
    static CyclotomicValue from_exponent_counts(std::uint32_t m, const std::vector<long long>& mult);
    static CyclotomicValue integer(std::uint32_t m, long long v);

    CyclotomicValue operator+(const CyclotomicValue& o) const;
    CyclotomicValue operator*(const CyclotomicValue& o) const;
    CyclotomicValue conjugate() const;
    bool is_integer() const;
    bool operator==(const CyclotomicValue& o) const = default;
    bool operator<(const CyclotomicValue& o) const { return coefficients < o.coefficients; }

    /// Comma-separated coefficients with trailing zeros dropped ("0" for zero).
    std::string to_string() const;
    static CyclotomicValue parse(std::uint32_t m, std::string_view text);
};

struct CharacterTable {
    std::uint32_t group_order = 1;
    std::uint32_t exponent = 1;
    /// Same order as PcGroup::classes().
    std::vector<ConjugacyClassInfo> classes;
    /// Rows ordered by degree, trivial character first, then by values.
    std::vector<std::vector<CyclotomicValue>> irreducibles;
    /// pi_n for every prime n <= exponent (and n = p).
    std::map<int, std::vector<std::uint32_t>> power_maps;

    std::vector<long long> degrees() const;
    /// Exact row and column orthogonality and sum of squared degrees.
    bool verify() const;

    /// "pgf-chartab v1 order exponent classes powers n1,n2,..", a classes line
    /// "size:order:img1,img2,.." per class, then one "chi v|v|.." line per row.
    std::string export_text() const;
    static CharacterTable import_text(std::string_view text);
};

struct CharTableOptions {
    std::size_t max_classes = 200;
};

/// Dixon-Burnside computation. Throws BoundExceeded above max_classes.
CharacterTable character_table(const GroupPtr& G, const CharTableOptions& opts = {});

/// pi_n on class indices: class of x^n for x in each class.
std::vector<std::uint32_t> power_map(const GroupPtr& G, long long n);

struct ClassMatching {
    /// tau[c] = class of H matched with class c of G.
    std::vector<std::uint32_t> tau;
    /// sigma[i] = row of H matched with row i of G.
    std::vector<std::uint32_t> sigma;
};

std::optional<ClassMatching> char_tables_equivalent(const CharacterTable& A, const CharacterTable& B);
/// Matching that also commutes with all stored prime power maps.
std::optional<ClassMatching> brauer_pair(const CharacterTable& A, const CharacterTable& B);
/// Checks every equality a matching asserts.
bool verify_matching(const CharacterTable& A, const CharacterTable& B, const ClassMatching& m, bool with_power_maps);

bool are_twins(const GroupPtr& G, const GroupPtr& H, const IdContext& ids);

}  // namespace pgf
