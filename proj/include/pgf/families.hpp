#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "pgf/presentation.hpp"

namespace pgf {

/// Smallest positive primitive root modulo the prime p.
int primitive_root(int p);

enum class Family { theorem1_Gx, tuple1, tuple2, tuple3 };

std::string_view to_string(Family f);
Family parse_family(std::string_view name);

/// One member of an explicit presentation family of order p^4 or p^5 (p > 3 prime).
/// `parameter` is x (theorem1_Gx) or w (tuples), as a residue modulo p.
struct FamilySpec {
    Family family = Family::theorem1_Gx;
    int p = 5;
    int parameter = 1;
};

/// Legal parameters in order: {1, v} for theorem1_Gx and tuple1, {v, ..., v^b} with
/// b = gcd(p-1, 4) for tuple2, {v, ..., v^a} with a = gcd(p-1, 3) for tuple3.
std::vector<int> family_parameters(Family f, int p);

/// The presentation of the requested member; throws InvalidInput for illegal specs.
PcPresentation paper_family(const FamilySpec& spec);

PcPresentation cyclic_presentation(int p, int k);
PcPresentation elementary_abelian_presentation(int p, int n);
/// Direct product, generators of `a` first.
PcPresentation direct_product(const PcPresentation& a, const PcPresentation& b);

}  // namespace pgf
