// Automorphism enumeration, outer automorphism comparison and isoclinism.

#include <algorithm>
#include <functional>
#include <map>
#include <set>

#include "cayley.hpp"
#include "pgf/canon.hpp"
#include "pgf/errors.hpp"
#include "pgf/structure.hpp"
#include "pgf/subgroup.hpp"

namespace pgf {

namespace {

std::uint32_t lead_of(const PcGroup& G, Elem x) {
    return (G.element_order(x) << 16) | G.classes()[G.class_of(x)].size;
}

// Visits every isomorphism A -> B as a full element map. visit returns false
// to stop early. Returns false when the node budget runs out.
bool enumerate_isomorphisms(const GroupPtr& A, const GroupPtr& B, std::uint64_t max_nodes,
                            const std::function<bool(const std::vector<Elem>&)>& visit) {
    if (A->order() != B->order() || A->prime() != B->prime()) return true;
    const auto tuple = minimal_generating_set(A);
    const Subgroup phiB = frattini_subgroup(B);
    if (static_cast<int>(tuple.size()) != B->ngens() - phiB.length()) return true;
    const std::size_t d = tuple.size();
    detail::CayleyScratch sa, sb;
    const auto mulA = [&](std::uint32_t x, std::uint32_t y) { return A->mul(x, y); };
    const auto mulB = [&](std::uint32_t x, std::uint32_t y) { return B->mul(x, y); };
    std::vector<std::vector<std::uint32_t>> ref(d);
    std::vector<std::uint32_t> ref_queue;
    for (std::size_t k = 0; k < d; ++k) {
        detail::cayley_code(A->order(), mulA, 0, std::span(tuple.data(), k + 1), lead_of(*A, tuple[k]), sa, nullptr,
                            ref[k]);
    }
    ref_queue = sa.queue;
    if (d == 0) {
        std::vector<Elem> perm{0};
        visit(perm);
        return true;
    }

    std::uint64_t nodes = 0;
    bool stopped = false, exhausted = false;
    std::vector<Elem> images;
    std::vector<std::uint32_t> code;
    std::function<void(std::size_t)> rec = [&](std::size_t k) {
        std::vector<Elem> gens(phiB.igs().begin(), phiB.igs().end());
        gens.insert(gens.end(), images.begin(), images.end());
        const Subgroup S = Subgroup::generated_by(B, gens);
        const std::uint32_t lead = lead_of(*A, tuple[k]);
        for (Elem y = 0; y < B->order() && !stopped && !exhausted; ++y) {
            if (S.contains(y) || lead_of(*B, y) != lead) continue;
            if (++nodes > max_nodes) {
                exhausted = true;
                return;
            }
            images.push_back(y);
            if (detail::cayley_code(B->order(), mulB, 0, images, lead, sb, &ref[k], code) == 0) {
                if (k + 1 == d) {
                    std::vector<Elem> perm(A->order());
                    for (std::size_t i = 0; i < ref_queue.size(); ++i) perm[ref_queue[i]] = sb.queue[i];
                    if (!visit(perm)) stopped = true;
                } else {
                    rec(k + 1);
                }
            }
            images.pop_back();
        }
    };
    rec(0);
    return !exhausted;
}

std::vector<std::uint32_t> table_orders(const TableGroup& T) {
    std::vector<std::uint32_t> out(T.order, 1);
    for (std::uint32_t x = 0; x < T.order; ++x) {
        std::uint32_t y = x;
        while (y != 0) {
            y = T.mul(y, x);
            ++out[x];
        }
    }
    return out;
}

}  // namespace

std::optional<std::vector<std::vector<Elem>>> automorphisms(const GroupPtr& G, const AutomorphismOptions& opts) {
    std::vector<std::vector<Elem>> out;
    bool over = false;
    const bool ok = enumerate_isomorphisms(G, G, opts.max_nodes, [&](const std::vector<Elem>& perm) {
        if (out.size() >= opts.max_automorphisms) {
            over = true;
            return false;
        }
        out.push_back(perm);
        return true;
    });
    if (!ok || over) return std::nullopt;
    return out;
}

std::optional<std::uint64_t> automorphism_order(const GroupPtr& G, const AutomorphismOptions& opts) {
    std::uint64_t count = 0;
    const bool ok = enumerate_isomorphisms(G, G, opts.max_nodes, [&](const std::vector<Elem>&) {
        ++count;
        return true;
    });
    if (!ok) return std::nullopt;
    return count;
}

namespace {

// Out(G) as a table group, or nothing when Aut(G) is over budget.
std::optional<TableGroup> outer_automorphism_group(const GroupPtr& G, const AutomorphismOptions& opts) {
    auto autos = automorphisms(G, opts);
    if (!autos) return std::nullopt;
    const auto tuple = minimal_generating_set(G);
    auto key_of = [&](const std::vector<Elem>& perm) {
        std::vector<Elem> k;
        for (Elem t : tuple) k.push_back(perm[t]);
        return k;
    };
    std::map<std::vector<Elem>, std::uint32_t> index;
    for (std::uint32_t i = 0; i < autos->size(); ++i) index.emplace(key_of((*autos)[i]), i);
    std::vector<std::vector<Elem>> inner;  // tuple images under conjugation
    std::set<std::vector<Elem>> seen;
    for (Elem g = 0; g < G->order(); ++g) {
        std::vector<Elem> k;
        for (Elem t : tuple) k.push_back(G->conj(t, g));
        if (seen.insert(k).second) inner.push_back(std::move(k));
    }
    // Composition a o b on tuple images: a applied to b's images.
    auto compose = [&](std::uint32_t a, const std::vector<Elem>& b_images) {
        std::vector<Elem> k;
        for (Elem x : b_images) k.push_back((*autos)[a][x]);
        return k;
    };
    std::vector<std::int64_t> coset(autos->size(), -1);
    std::vector<std::uint32_t> reps;
    const std::vector<Elem> identity_key = tuple;
    std::vector<std::uint32_t> order_of_processing;
    order_of_processing.push_back(index.at(identity_key));
    for (std::uint32_t i = 0; i < autos->size(); ++i) order_of_processing.push_back(i);
    for (std::uint32_t a : order_of_processing) {
        if (coset[a] >= 0) continue;
        const auto c = static_cast<std::int64_t>(reps.size());
        reps.push_back(a);
        for (const auto& n : inner) coset[index.at(compose(a, n))] = c;
    }
    TableGroup out;
    out.order = static_cast<std::uint32_t>(reps.size());
    out.table.resize(static_cast<std::size_t>(out.order) * out.order);
    for (std::uint32_t i = 0; i < out.order; ++i)
        for (std::uint32_t j = 0; j < out.order; ++j)
            out.table[i * out.order + j] =
                static_cast<std::uint32_t>(coset[index.at(compose(reps[i], key_of((*autos)[reps[j]])))]);
    return out;
}

}  // namespace

std::optional<bool> outer_equivalent(const GroupPtr& G, const GroupPtr& H, const AutomorphismOptions& opts) {
    const auto a = outer_automorphism_group(G, opts);
    if (!a) return std::nullopt;
    const auto b = outer_automorphism_group(H, opts);
    if (!b) return std::nullopt;
    return table_groups_isomorphic(*a, *b);
}

bool table_groups_isomorphic(const TableGroup& A, const TableGroup& B) {
    if (A.order != B.order) return false;
    const auto oa = table_orders(A), ob = table_orders(B);
    {
        auto sa = oa, sb = ob;
        std::sort(sa.begin(), sa.end());
        std::sort(sb.begin(), sb.end());
        if (sa != sb) return false;
    }
    const auto mulA = [&](std::uint32_t x, std::uint32_t y) { return A.mul(x, y); };
    const auto mulB = [&](std::uint32_t x, std::uint32_t y) { return B.mul(x, y); };
    detail::CayleyScratch sa, sb;
    // Greedy generating set of A, largest orders first.
    std::vector<std::uint32_t> by_order(A.order);
    for (std::uint32_t i = 0; i < A.order; ++i) by_order[i] = i;
    std::stable_sort(by_order.begin(), by_order.end(), [&](auto x, auto y) { return oa[x] > oa[y]; });
    std::vector<std::uint32_t> gens, code;
    std::vector<std::vector<std::uint32_t>> ref;
    std::vector<char> inside(A.order, 0);
    inside[0] = 1;
    for (std::uint32_t x : by_order) {
        if (inside[x]) continue;
        gens.push_back(x);
        ref.emplace_back();
        detail::cayley_code(A.order, mulA, 0, gens, oa[x], sa, nullptr, ref.back());
        for (auto y : sa.queue) inside[y] = 1;
    }
    std::vector<std::uint32_t> images;
    std::function<bool(std::size_t)> rec = [&](std::size_t k) {
        if (k == gens.size()) return true;
        for (std::uint32_t y = 0; y < B.order; ++y) {
            if (ob[y] != oa[gens[k]]) continue;
            images.push_back(y);
            const bool match = detail::cayley_code(B.order, mulB, 0, images, ob[y], sb, &ref[k], code) == 0;
            if (match && rec(k + 1)) return true;
            images.pop_back();
        }
        return false;
    };
    return rec(0);
}

std::optional<IsoclinismWitness> isoclinic(const GroupPtr& G, const GroupPtr& H) {
    constexpr std::uint64_t kMaxNodes = 20'000'000;
    if (G->prime() != H->prime()) return std::nullopt;
    const Subgroup ZG = center(G), ZH = center(H);
    const Subgroup DG = derived_subgroup(G), DH = derived_subgroup(H);
    if (G->order() / ZG.order() != H->order() / ZH.order() || DG.order() != DH.order()) return std::nullopt;
    IsoclinismWitness w;
    w.central_quotient_g = make_group(quotient(G, ZG));
    w.central_quotient_h = make_group(quotient(H, ZH));
    const auto& QG = w.central_quotient_g;
    const auto& QH = w.central_quotient_h;

    auto lifts = [](const GroupPtr& X, const Subgroup& Z, const GroupPtr& Q) {
        std::vector<Elem> out(Q->order(), UINT32_MAX);
        for (Elem x = 0; x < X->order(); ++x) {
            const Elem q = Q->element(quotient_image(Z, x));
            if (out[q] == UINT32_MAX) out[q] = x;
        }
        return out;
    };
    const auto liftG = lifts(G, ZG, QG), liftH = lifts(H, ZH, QH);

    // Commutator table of G on coset representatives.
    const std::uint32_t m = QG->order();
    std::vector<Elem> commG(static_cast<std::size_t>(m) * m);
    for (Elem u = 0; u < m; ++u)
        for (Elem v = 0; v < m; ++v) commG[u * m + v] = G->comm(liftG[u], liftG[v]);
    std::vector<Elem> gens;  // distinct nontrivial commutators of G
    {
        std::vector<char> seen(G->order(), 0);
        for (Elem c : commG)
            if (c != 0 && !seen[c]) {
                seen[c] = 1;
                gens.push_back(c);
            }
    }

    std::optional<IsoclinismWitness> found;
    std::vector<Elem> beta(G->order());
    std::vector<char> assigned(G->order());
    const bool ok = enumerate_isomorphisms(QG, QH, kMaxNodes, [&](const std::vector<Elem>& alpha) {
        std::fill(assigned.begin(), assigned.end(), 0);
        for (Elem u = 0; u < m; ++u)
            for (Elem v = 0; v < m; ++v) {
                const Elem c = commG[u * m + v];
                const Elem img = H->comm(liftH[alpha[u]], liftH[alpha[v]]);
                if (!assigned[c]) {
                    assigned[c] = 1;
                    beta[c] = img;
                } else if (beta[c] != img) {
                    return true;  // not well defined, try the next alpha
                }
            }
        // beta must extend to an isomorphism [G,G] -> [H,H].
        std::vector<Elem> phi(G->order(), UINT32_MAX);
        std::vector<Elem> queue{0};
        phi[0] = 0;
        for (std::size_t head = 0; head < queue.size(); ++head) {
            const Elem x = queue[head];
            for (Elem c : gens) {
                const Elem y = G->mul(x, c);
                const Elem img = H->mul(phi[x], beta[c]);
                if (phi[y] == UINT32_MAX) {
                    phi[y] = img;
                    queue.push_back(y);
                } else if (phi[y] != img) {
                    return true;
                }
            }
        }
        std::vector<char> hit(H->order(), 0);
        for (Elem x : queue) {
            if (hit[phi[x]] || !DH.contains(phi[x])) return true;
            hit[phi[x]] = 1;
        }
        IsoclinismWitness out = w;
        for (int i = 0; i < QG->ngens(); ++i) out.alpha.push_back(alpha[QG->generator(i)]);
        out.derived_generators = DG.igs();
        for (Elem g : DG.igs()) out.beta.push_back(phi[g]);
        found = std::move(out);
        return false;
    });
    if (!ok && !found) throw BoundExceeded("isoclinic: search budget exceeded");
    return found;
}

}  // namespace pgf
