#include "pgf/structure.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "pgf/errors.hpp"

namespace pgf {

std::string_view to_string(SeriesKind kind) {
    switch (kind) {
        case SeriesKind::derived: return "derived";
        case SeriesKind::lower_central: return "lower_central";
        case SeriesKind::upper_central: return "upper_central";
        case SeriesKind::lower_exponent_p: return "lower_exponent_p";
        case SeriesKind::frattini: return "frattini";
    }
    return "?";
}

std::vector<ConjugacyClassInfo> conjugacy_classes(const GroupPtr& G) { return G->classes(); }

std::vector<std::uint32_t> element_order_multiset(const GroupPtr& G) {
    std::vector<std::uint32_t> out(G->order());
    for (Elem x = 0; x < G->order(); ++x) out[x] = G->element_order(x);
    std::sort(out.begin(), out.end());
    return out;
}

namespace {

// Normal closure of `seeds` under conjugation by `conjugators`.
Subgroup close_under(const GroupPtr& G, std::vector<Elem> seeds, std::span<const Elem> conjugators) {
    Subgroup S = Subgroup::generated_by(G, seeds);
    for (bool grown = true; grown;) {
        grown = false;
        for (Elem u : std::vector<Elem>(S.igs()))
            for (Elem g : conjugators) {
                const Elem c = G->conj(u, g);
                if (!S.contains(c)) {
                    auto gens = S.igs();
                    gens.push_back(c);
                    S = Subgroup::generated_by(G, gens);
                    grown = true;
                }
            }
    }
    return S;
}

std::vector<Elem> group_generators(const GroupPtr& G) {
    std::vector<Elem> gens;
    for (int i = 0; i < G->ngens(); ++i) gens.push_back(G->generator(i));
    return gens;
}

// Phi(H) = H^p [H, H] for a subgroup H.
Subgroup frattini_of(const Subgroup& H) {
    const auto& G = H.parent();
    std::vector<Elem> seeds;
    for (Elem u : H.igs()) {
        seeds.push_back(G->pow(u, G->prime()));
        for (Elem v : H.igs()) seeds.push_back(G->comm(u, v));
    }
    return close_under(G, seeds, H.igs());
}

Subgroup derived_of(const Subgroup& H) {
    const auto& G = H.parent();
    std::vector<Elem> seeds;
    for (Elem u : H.igs())
        for (Elem v : H.igs()) seeds.push_back(G->comm(u, v));
    return close_under(G, seeds, H.igs());
}

std::vector<std::uint32_t> invariants_of_abelian(const GroupPtr& A) {
    // r_k = number of cyclic factors of order >= p^k; |A^{p^{k-1}} : A^{p^k}| = p^{r_k}.
    const std::uint32_t p = static_cast<std::uint32_t>(A->prime());
    std::vector<std::uint32_t> sizes;
    std::uint32_t m = 1;
    while (true) {
        std::set<Elem> powers;
        for (Elem x = 0; x < A->order(); ++x) powers.insert(A->pow(x, m));
        sizes.push_back(static_cast<std::uint32_t>(powers.size()));
        if (powers.size() == 1) break;
        m *= p;
    }
    auto logp = [&](std::uint32_t v) {
        int k = 0;
        while (v > 1) {
            v /= p;
            ++k;
        }
        return k;
    };
    std::vector<int> r;  // r[k-1] = r_k
    for (std::size_t k = 1; k < sizes.size(); ++k) r.push_back(logp(sizes[k - 1] / sizes[k]));
    r.push_back(0);
    std::vector<std::uint32_t> out;
    std::uint32_t q = 1;
    for (std::size_t k = 0; k + 1 < r.size(); ++k) {
        q *= p;
        for (int c = 0; c < r[k] - r[k + 1]; ++c) out.push_back(q);
    }
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace

Subgroup normal_closure(const GroupPtr& G, std::span<const Elem> gens) {
    const auto conj = group_generators(G);
    return close_under(G, std::vector<Elem>(gens.begin(), gens.end()), conj);
}

Subgroup center(const GroupPtr& G) {
    std::vector<Elem> members;
    for (Elem x = 0; x < G->order(); ++x) {
        bool central = true;
        for (int k = 0; k < G->ngens() && central; ++k)
            central = G->mul(x, G->generator(k)) == G->mul(G->generator(k), x);
        if (central) members.push_back(x);
    }
    return Subgroup::from_members(G, members);
}

Subgroup derived_subgroup(const GroupPtr& G) { return derived_of(Subgroup::whole(G)); }

Subgroup frattini_subgroup(const GroupPtr& G) { return frattini_of(Subgroup::whole(G)); }

Subgroup commutator_subgroup(const Subgroup& A, const Subgroup& B) {
    const auto& G = A.parent();
    std::vector<Elem> seeds;
    for (Elem a : A.igs())
        for (Elem b : B.igs()) seeds.push_back(G->comm(a, b));
    return normal_closure(G, seeds);
}

SeriesData series(const GroupPtr& G, SeriesKind kind) {
    SeriesData out{kind, {}};
    const auto gens = group_generators(G);
    if (kind == SeriesKind::upper_central) {
        Subgroup Z = Subgroup::trivial(G);
        out.terms.push_back(Z);
        while (Z.order() < G->order()) {
            std::vector<Elem> members;
            for (Elem x = 0; x < G->order(); ++x) {
                bool ok = true;
                for (Elem g : gens)
                    if (!Z.contains(G->comm(x, g))) {
                        ok = false;
                        break;
                    }
                if (ok) members.push_back(x);
            }
            Subgroup next = Subgroup::from_members(G, members);
            if (next == Z) break;  // cannot happen for p-groups
            Z = next;
            out.terms.push_back(Z);
        }
        return out;
    }
    Subgroup cur = Subgroup::whole(G);
    out.terms.push_back(cur);
    while (cur.order() > 1) {
        Subgroup next;
        switch (kind) {
            case SeriesKind::derived: next = derived_of(cur); break;
            case SeriesKind::lower_central: {
                std::vector<Elem> seeds;
                for (Elem u : cur.igs())
                    for (Elem g : gens) seeds.push_back(G->comm(u, g));
                next = close_under(G, seeds, gens);
                break;
            }
            case SeriesKind::lower_exponent_p: {
                std::vector<Elem> seeds;
                for (Elem u : cur.igs()) {
                    seeds.push_back(G->pow(u, G->prime()));
                    for (Elem g : gens) seeds.push_back(G->comm(u, g));
                }
                next = close_under(G, seeds, gens);
                break;
            }
            case SeriesKind::frattini: next = frattini_of(cur); break;
            case SeriesKind::upper_central: break;
        }
        if (next == cur) break;  // nilpotent p-groups never stall
        cur = next;
        out.terms.push_back(cur);
    }
    return out;
}

std::vector<Elem> minimal_generating_set(const GroupPtr& G) {
    const Subgroup phi = frattini_subgroup(G);
    std::vector<Elem> gens(phi.igs().begin(), phi.igs().end());
    std::vector<Elem> out;
    Subgroup S = phi;
    for (int i = 0; i < G->ngens() && S.order() < G->order(); ++i) {
        const Elem g = G->generator(i);
        if (S.contains(g)) continue;
        out.push_back(g);
        gens.push_back(g);
        S = Subgroup::generated_by(G, gens);
    }
    return out;
}

int rank(const GroupPtr& G) { return G->ngens() - frattini_subgroup(G).length(); }

GroupPtr subgroup_as_group(const Subgroup& U) { return make_group(U.induced_presentation()); }

Exponents quotient_image(const Subgroup& N, Elem x) {
    const auto& G = *N.parent();
    std::vector<char> leading(static_cast<std::size_t>(G.ngens()), 0);
    for (Elem u : N.igs()) {
        const int d = G.depth(u);
        leading[static_cast<std::size_t>(d)] = 1;
        const int c = G.exponent_at(x, d);
        if (c) x = G.mul(x, G.pow(u, -c));
    }
    Exponents image;
    for (int d = 0; d < G.ngens(); ++d)
        if (!leading[static_cast<std::size_t>(d)]) image.push_back(G.exponent_at(x, d));
    return image;
}

PcPresentation quotient(const GroupPtr& G, const Subgroup& N) {
    if (!N.is_normal()) throw InvalidInput("quotient: subgroup is not normal");
    std::vector<int> positions;
    for (int d = 0; d < G->ngens(); ++d)
        if (!N.at_depth(d)) positions.push_back(d);
    const int m = static_cast<int>(positions.size());
    PcPresentation pres(G->prime(), m);
    for (int i = 0; i < m; ++i) {
        const Elem gi = G->generator(positions[static_cast<std::size_t>(i)]);
        const Elem pw = G->pow(gi, G->prime());
        if (pw) pres.set_power(i, quotient_image(N, pw));
        for (int j = i + 1; j < m; ++j) {
            const Elem c = G->comm(G->generator(positions[static_cast<std::size_t>(j)]), gi);
            if (c) pres.set_commutator(j, i, quotient_image(N, c));
        }
    }
    return pres;
}

std::vector<std::uint32_t> abelian_invariants(const GroupPtr& G) {
    const Subgroup D = derived_subgroup(G);
    return invariants_of_abelian(make_group(quotient(G, D)));
}

std::vector<std::vector<std::uint32_t>> derived_series_abelian_invariants(const GroupPtr& G) {
    std::vector<std::vector<std::uint32_t>> out;
    for (const auto& term : series(G, SeriesKind::derived).terms) {
        if (term.order() == 1) break;
        out.push_back(abelian_invariants(subgroup_as_group(term)));
    }
    return out;
}

namespace {

// Extends each subgroup U in `layer` by elements x with x^p in U that normalize U and
// satisfy `accept`; the new subgroup is the union of the cosets U x^i.
template <typename Accept>
std::vector<Subgroup> next_layer(const GroupPtr& G, const std::vector<Subgroup>& layer, Accept&& accept) {
    std::map<std::vector<Elem>, Subgroup> found;
    std::vector<char> covered(G->order());
    for (const auto& U : layer) {
        std::fill(covered.begin(), covered.end(), 0);
        const auto members = U.elements();
        for (Elem x = 1; x < G->order(); ++x) {
            if (covered[x] || U.contains(x)) continue;
            if (!U.contains(G->pow(x, G->prime())) || !U.normalized_by(x) || !accept(U, x)) continue;
            std::vector<Elem> v;
            v.reserve(members.size() * static_cast<std::size_t>(G->prime()));
            Elem xi = 0;
            for (int i = 0; i < G->prime(); ++i) {
                for (Elem u : members) v.push_back(G->mul(u, xi));
                xi = G->mul(xi, x);
            }
            for (Elem y : v) covered[y] = 1;
            Subgroup V = Subgroup::from_members(G, v);
            found.try_emplace(V.igs(), std::move(V));
        }
    }
    std::vector<Subgroup> out;
    out.reserve(found.size());
    for (auto& [key, S] : found) out.push_back(std::move(S));
    return out;
}

}  // namespace

std::vector<Subgroup> normal_subgroups(const GroupPtr& G) {
    const auto gens = group_generators(G);
    std::vector<Subgroup> out;
    std::vector<Subgroup> layer{Subgroup::trivial(G)};
    // Every normal subgroup of a p-group has a normal subgroup of G of index p.
    while (!layer.empty() && layer.front().order() < G->order()) {
        layer = next_layer(G, layer, [&](const Subgroup& U, Elem x) {
            for (Elem g : gens)
                if (!U.contains(G->comm(x, g))) return false;
            return true;
        });
        out.insert(out.end(), layer.begin(), layer.end());
    }
    if (G->order() == 1) return {};
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<Subgroup> maximal_subgroups(const GroupPtr& G) {
    const Subgroup Phi = frattini_subgroup(G);
    const int d = G->ngens() - Phi.length();
    const int p = G->prime();
    std::vector<Subgroup> out;
    if (d == 0) return out;
    std::vector<Exponents> coords(G->order());
    for (Elem x = 0; x < G->order(); ++x) coords[x] = quotient_image(Phi, x);
    // Normalized functionals: first nonzero coefficient equal to 1.
    std::vector<int> f(static_cast<std::size_t>(d), 0);
    std::uint64_t total = 1;
    for (int i = 0; i < d; ++i) total *= static_cast<std::uint64_t>(p);
    for (std::uint64_t code = 1; code < total; ++code) {
        std::uint64_t c = code;
        for (int i = d - 1; i >= 0; --i) {
            f[static_cast<std::size_t>(i)] = static_cast<int>(c % static_cast<std::uint64_t>(p));
            c /= static_cast<std::uint64_t>(p);
        }
        const auto lead = std::find_if(f.begin(), f.end(), [](int v) { return v != 0; });
        if (*lead != 1) continue;
        std::vector<Elem> members;
        for (Elem x = 0; x < G->order(); ++x) {
            long long s = 0;
            for (int i = 0; i < d; ++i) s += static_cast<long long>(f[static_cast<std::size_t>(i)]) * coords[x][static_cast<std::size_t>(i)];
            if (s % p == 0) members.push_back(x);
        }
        out.push_back(Subgroup::from_members(G, members));
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<Subgroup> central_cyclic_subgroups(const GroupPtr& G) {
    const Subgroup Z = center(G);
    std::map<std::vector<Elem>, Subgroup> found;
    for (Elem z : Z.elements()) {
        if (z == 0) continue;
        Subgroup C = Subgroup::generated_by(G, std::span<const Elem>(&z, 1));
        found.try_emplace(C.igs(), std::move(C));
    }
    std::vector<Subgroup> out;
    for (auto& [k, S] : found) out.push_back(std::move(S));
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<Subgroup> all_subgroups(const GroupPtr& G, const SubgroupOptions& opts) {
    if (G->order() > opts.max_order)
        throw BoundExceeded("subgroup enumeration: order " + std::to_string(G->order()) + " exceeds bound " +
                            std::to_string(opts.max_order));
    std::vector<Subgroup> out{Subgroup::trivial(G)};
    std::vector<Subgroup> layer = out;
    while (!layer.empty() && layer.front().order() < G->order()) {
        layer = next_layer(G, layer, [](const Subgroup&, Elem) { return true; });
        out.insert(out.end(), layer.begin(), layer.end());
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<SubgroupClass> subgroup_conjugacy_classes(const GroupPtr& G, const SubgroupOptions& opts) {
    auto subs = all_subgroups(G, opts);
    std::map<std::vector<Elem>, std::size_t> index;
    for (std::size_t i = 0; i < subs.size(); ++i) index.emplace(subs[i].igs(), i);
    std::vector<char> seen(subs.size(), 0);
    std::vector<SubgroupClass> out;
    for (std::size_t i = 0; i < subs.size(); ++i) {
        if (seen[i] || subs[i].order() == G->order()) continue;
        std::vector<std::size_t> orbit{i};
        seen[i] = 1;
        for (std::size_t head = 0; head < orbit.size(); ++head)
            for (int k = 0; k < G->ngens(); ++k) {
                const Subgroup c = subs[orbit[head]].conjugate(G->generator(k));
                const auto j = index.at(c.igs());
                if (!seen[j]) {
                    seen[j] = 1;
                    orbit.push_back(j);
                }
            }
        const auto rep = *std::min_element(orbit.begin(), orbit.end(),
                                           [&](auto a, auto b) { return subs[a] < subs[b]; });
        out.push_back({subs[rep], static_cast<std::uint32_t>(orbit.size())});
    }
    std::sort(out.begin(), out.end(), [](const SubgroupClass& a, const SubgroupClass& b) {
        if (a.representative.order() != b.representative.order())
            return a.representative.order() < b.representative.order();
        if (a.length != b.length) return a.length < b.length;
        return a.representative < b.representative;
    });
    return out;
}

}  // namespace pgf
