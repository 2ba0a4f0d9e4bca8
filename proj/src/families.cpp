#include "pgf/families.hpp"

#include <algorithm>
#include <numeric>

#include "pgf/errors.hpp"

namespace pgf {

namespace {

Exponents unit(int n, int i, int e) {
    Exponents v(static_cast<std::size_t>(n), 0);
    v[static_cast<std::size_t>(i)] = e;
    return v;
}

}  // namespace

int primitive_root(int p) {
    if (!is_prime(p)) throw InvalidInput("primitive_root: " + std::to_string(p) + " is not prime");
    if (p == 2) return 1;
    for (int g = 1; g < p; ++g) {
        int x = 1;
        int ord = 0;
        do {
            x = x * g % p;
            ++ord;
        } while (x != 1);
        if (ord == p - 1) return g;
    }
    return 1;
}

std::string_view to_string(Family f) {
    switch (f) {
        case Family::theorem1_Gx: return "theorem1_Gx";
        case Family::tuple1: return "tuple1";
        case Family::tuple2: return "tuple2";
        case Family::tuple3: return "tuple3";
    }
    return "?";
}

Family parse_family(std::string_view name) {
    for (auto f : {Family::theorem1_Gx, Family::tuple1, Family::tuple2, Family::tuple3})
        if (to_string(f) == name) return f;
    throw InvalidInput("unknown family '" + std::string(name) + "'");
}

std::vector<int> family_parameters(Family f, int p) {
    if (!is_prime(p) || p <= 3) throw InvalidInput("families are defined for primes p > 3");
    const int v = primitive_root(p);
    std::vector<int> out;
    switch (f) {
        case Family::theorem1_Gx:
        case Family::tuple1: out = {1, v}; break;
        case Family::tuple2:
        case Family::tuple3: {
            const int count = std::gcd(p - 1, f == Family::tuple2 ? 4 : 3);
            int w = 1;
            for (int i = 0; i < count; ++i) {
                w = w * v % p;
                out.push_back(w);
            }
            break;
        }
    }
    return out;
}

PcPresentation paper_family(const FamilySpec& spec) {
    const int p = spec.p;
    const auto legal = family_parameters(spec.family, p);
    const int param = ((spec.parameter % p) + p) % p;
    if (std::find(legal.begin(), legal.end(), param) == legal.end())
        throw InvalidInput("parameter " + std::to_string(spec.parameter) + " is not legal for " +
                           std::string(to_string(spec.family)) + " at p=" + std::to_string(p));
    // 0-based: g1 -> 0, ..., g5 -> 4.
    switch (spec.family) {
        case Family::theorem1_Gx: {
            PcPresentation pres(p, 4);
            pres.set_power(1, unit(4, 3, param));
            pres.set_commutator(1, 0, unit(4, 2, 1));
            pres.set_commutator(2, 0, unit(4, 3, 1));
            return pres;
        }
        case Family::tuple1: {
            PcPresentation pres(p, 5);
            pres.set_commutator(1, 0, unit(5, 2, 1));
            pres.set_commutator(3, 0, unit(5, 4, 1));
            pres.set_commutator(2, 1, unit(5, 4, 1));
            pres.set_power(0, unit(5, 4, param));
            return pres;
        }
        case Family::tuple2: {
            PcPresentation pres(p, 5);
            pres.set_commutator(1, 0, unit(5, 2, 1));
            pres.set_commutator(2, 0, unit(5, 3, 1));
            pres.set_commutator(3, 0, unit(5, 4, 1));
            pres.set_commutator(2, 1, unit(5, 4, 1));
            pres.set_power(0, unit(5, 4, param));
            return pres;
        }
        case Family::tuple3: {
            PcPresentation pres(p, 5);
            pres.set_commutator(1, 0, unit(5, 2, 1));
            pres.set_commutator(2, 0, unit(5, 4, 1));
            pres.set_commutator(2, 1, unit(5, 3, 1));
            pres.set_commutator(3, 1, unit(5, 4, 1));
            pres.set_power(0, unit(5, 4, param));
            return pres;
        }
    }
    throw InvalidInput("unknown family");
}

PcPresentation cyclic_presentation(int p, int k) {
    PcPresentation pres(p, k);
    for (int i = 0; i + 1 < k; ++i) pres.set_power(i, unit(k, i + 1, 1));
    return pres;
}

PcPresentation elementary_abelian_presentation(int p, int n) { return PcPresentation(p, n); }

PcPresentation direct_product(const PcPresentation& a, const PcPresentation& b) {
    if (a.prime() != b.prime()) throw InvalidInput("direct_product: primes differ");
    const int na = a.ngens();
    const int n = na + b.ngens();
    PcPresentation pres(a.prime(), n);
    auto embed = [&](const Exponents& w, int offset) {
        Exponents v(static_cast<std::size_t>(n), 0);
        for (std::size_t t = 0; t < w.size(); ++t) v[t + static_cast<std::size_t>(offset)] = w[t];
        return v;
    };
    for (int i = 0; i < na; ++i) {
        if (!a.is_trivial_power(i)) pres.set_power(i, embed(a.power(i), 0));
        for (int j = i + 1; j < na; ++j)
            if (!a.is_trivial_commutator(j, i)) pres.set_commutator(j, i, embed(a.commutator(j, i), 0));
    }
    for (int i = 0; i < b.ngens(); ++i) {
        if (!b.is_trivial_power(i)) pres.set_power(na + i, embed(b.power(i), na));
        for (int j = i + 1; j < b.ngens(); ++j)
            if (!b.is_trivial_commutator(j, i)) pres.set_commutator(na + j, na + i, embed(b.commutator(j, i), na));
    }
    return pres;
}

}  // namespace pgf
