#pragma once

// Shared test fixtures and brute-force oracles. The oracles work from the Cayley
// table or from hand-built models and deliberately avoid the library algorithms
// they are used to check.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <vector>

#include "pgf/families.hpp"
#include "pgf/group.hpp"
#include "pgf/presentation.hpp"

namespace pgf::testing {

inline Exponents unit(int n, int i, int e = 1) {
    Exponents v(static_cast<std::size_t>(n), 0);
    v[static_cast<std::size_t>(i)] = e;
    return v;
}

inline PcPresentation dihedral8() {
    PcPresentation pres(2, 3);
    pres.set_power(1, unit(3, 2));
    pres.set_commutator(1, 0, unit(3, 2));
    return pres;
}

inline PcPresentation quaternion8() {
    PcPresentation pres(2, 3);
    pres.set_power(0, unit(3, 2));
    pres.set_power(1, unit(3, 2));
    pres.set_commutator(1, 0, unit(3, 2));
    return pres;
}

inline PcPresentation theorem1(int p, int x) { return paper_family({Family::theorem1_Gx, p, x}); }

/// Heisenberg group of order p^3 (exponent p for odd p).
inline PcPresentation heisenberg(int p) {
    PcPresentation pres(p, 3);
    pres.set_commutator(1, 0, unit(3, 2));
    return pres;
}

/// Extraspecial group of order p^3 and exponent p^2: a^p = c, [b, a] = c.
inline PcPresentation extraspecial_exp_p2(int p) {
    PcPresentation pres(p, 3);
    pres.set_power(0, unit(3, 2));
    pres.set_commutator(1, 0, unit(3, 2));
    return pres;
}

/// Random pc-presentation of the given shape (may be inconsistent).
inline PcPresentation random_presentation(int p, int n, std::mt19937_64& rng) {
    std::uniform_int_distribution<int> digit(0, p - 1);
    PcPresentation pres(p, n);
    for (int i = 0; i < n; ++i) {
        Exponents w(static_cast<std::size_t>(n), 0);
        for (int t = i + 1; t < n; ++t) w[static_cast<std::size_t>(t)] = digit(rng);
        pres.set_power(i, w);
        for (int j = i + 1; j < n; ++j) {
            Exponents c(static_cast<std::size_t>(n), 0);
            for (int t = j + 1; t < n; ++t) c[static_cast<std::size_t>(t)] = digit(rng);
            pres.set_commutator(j, i, c);
        }
    }
    return pres;
}

/// Order check through the right regular action: the permutations x -> x g_k
/// (built from single-generator collection only) must satisfy every relation.
inline bool regular_action_consistent(const PcPresentation& pres) {
    const auto N = pres.order();
    const int n = pres.ngens();
    const int p = pres.prime();
    auto encode = [&](const Exponents& e) {
        std::uint32_t x = 0;
        for (int i = 0; i < n; ++i) x = x * static_cast<std::uint32_t>(p) + static_cast<std::uint32_t>(e[static_cast<std::size_t>(i)]);
        return x;
    };
    auto decode = [&](std::uint32_t x) {
        Exponents e(static_cast<std::size_t>(n));
        for (int i = n - 1; i >= 0; --i) {
            e[static_cast<std::size_t>(i)] = static_cast<int>(x % static_cast<std::uint32_t>(p));
            x /= static_cast<std::uint32_t>(p);
        }
        return e;
    };
    std::vector<std::vector<std::uint32_t>> R(static_cast<std::size_t>(n), std::vector<std::uint32_t>(N));
    for (std::uint32_t x = 0; x < N; ++x)
        for (int k = 0; k < n; ++k) R[static_cast<std::size_t>(k)][x] = encode(pres.multiply_generator(decode(x), k));
    auto apply_word = [&](std::uint32_t x, const Exponents& w) {
        for (int t = 0; t < n; ++t)
            for (int e = 0; e < w[static_cast<std::size_t>(t)]; ++e) x = R[static_cast<std::size_t>(t)][x];
        return x;
    };
    for (std::uint32_t x = 0; x < N; ++x)
        for (int i = 0; i < n; ++i) {
            std::uint32_t y = x;
            for (int e = 0; e < p; ++e) y = R[static_cast<std::size_t>(i)][y];
            if (y != apply_word(x, pres.power(i))) return false;
            for (int j = i + 1; j < n; ++j) {
                // g_j g_i = g_i g_j [g_j, g_i]
                const auto lhs = R[static_cast<std::size_t>(i)][R[static_cast<std::size_t>(j)][x]];
                const auto rhs = apply_word(R[static_cast<std::size_t>(j)][R[static_cast<std::size_t>(i)][x]], pres.commutator(j, i));
                if (lhs != rhs) return false;
            }
        }
    return true;
}

/// Conjugacy classes by direct all-pairs conjugation: sorted (size, order) pairs.
inline std::vector<std::pair<std::uint32_t, std::uint32_t>> brute_class_profile(const GroupPtr& G) {
    std::vector<int> cls(G->order(), -1);
    std::vector<std::pair<std::uint32_t, std::uint32_t>> out;
    int next = 0;
    for (Elem x = 0; x < G->order(); ++x) {
        if (cls[x] >= 0) continue;
        std::set<Elem> c;
        for (Elem g = 0; g < G->order(); ++g) c.insert(G->mul(G->mul(G->inv(g), x), g));
        for (Elem y : c) cls[y] = next;
        ++next;
        std::uint32_t o = 1;
        for (Elem y = x; y != 0; y = G->mul(y, x)) ++o;
        if (x == 0) o = 1;
        out.emplace_back(static_cast<std::uint32_t>(c.size()), o);
    }
    std::sort(out.begin(), out.end());
    return out;
}

/// Every subgroup as a sorted element list, by saturating closures <H, x>.
inline std::set<std::vector<Elem>> brute_subgroups(const GroupPtr& G) {
    auto close = [&](std::vector<Elem> gens) {
        std::set<Elem> s{0};
        std::vector<Elem> queue{0};
        for (std::size_t h = 0; h < queue.size(); ++h)
            for (Elem g : gens) {
                const Elem y = G->mul(queue[h], g);
                if (s.insert(y).second) queue.push_back(y);
            }
        return std::vector<Elem>(s.begin(), s.end());
    };
    std::set<std::vector<Elem>> all{{0}};
    std::vector<std::vector<Elem>> frontier{{0}};
    while (!frontier.empty()) {
        std::vector<std::vector<Elem>> next;
        for (const auto& H : frontier)
            for (Elem x = 0; x < G->order(); ++x) {
                if (std::binary_search(H.begin(), H.end(), x)) continue;
                auto gens = H;
                gens.push_back(x);
                auto K = close(gens);
                if (all.insert(K).second) next.push_back(K);
            }
        frontier = std::move(next);
    }
    return all;
}

/// Verifies the Cayley table of G is associative on all triples (or a random sample).
inline bool table_associative(const GroupPtr& G, std::size_t samples = 0, std::uint64_t seed = 1) {
    const auto N = G->order();
    if (samples == 0) {
        for (Elem a = 0; a < N; ++a)
            for (Elem b = 0; b < N; ++b)
                for (Elem c = 0; c < N; ++c)
                    if (G->mul(G->mul(a, b), c) != G->mul(a, G->mul(b, c))) return false;
        return true;
    }
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<Elem> pick(0, N - 1);
    for (std::size_t s = 0; s < samples; ++s) {
        const Elem a = pick(rng), b = pick(rng), c = pick(rng);
        if (G->mul(G->mul(a, b), c) != G->mul(a, G->mul(b, c))) return false;
    }
    return true;
}


// Number of isomorphisms G -> H (stop after the first if first_only), by
// assigning images of the pc generators from the last one upwards and checking
// every defining relation as soon as its letters are assigned.
inline std::uint64_t brute_isomorphisms(const GroupPtr& G, const GroupPtr& H, bool first_only = false) {
    if (G->order() != H->order() || G->prime() != H->prime()) return 0;
    const auto& P = G->presentation();
    const int n = P.ngens();
    const int p = P.prime();
    std::vector<Elem> img(static_cast<std::size_t>(n));
    auto eval = [&](const Exponents& w) {
        Elem x = 0;
        for (int t = 0; t < n; ++t) x = H->mul(x, H->pow(img[static_cast<std::size_t>(t)], w[static_cast<std::size_t>(t)]));
        return x;
    };
    std::uint64_t count = 0;
    std::function<bool(int)> rec = [&](int i) -> bool {
        if (i < 0) {
            std::vector<char> hit(H->order(), 0);
            for (Elem x = 0; x < G->order(); ++x) {
                Elem y = eval(G->exponents(x));
                if (hit[y]) return false;
                hit[y] = 1;
            }
            ++count;
            return first_only;
        }
        for (Elem y = 0; y < H->order(); ++y) {
            if (H->element_order(y) != G->element_order(G->generator(i))) continue;
            img[static_cast<std::size_t>(i)] = y;
            bool ok = H->pow(y, p) == eval(P.power(i));
            for (int j = i + 1; j < n && ok; ++j) ok = H->comm(img[static_cast<std::size_t>(j)], y) == eval(P.commutator(j, i));
            if (ok && rec(i - 1)) return true;
        }
        return false;
    };
    rec(n - 1);
    return count;
}

// Isomorphism classes of the given groups, found with the brute-force
// isomorphism oracle inside buckets of cheap invariants.
inline std::vector<GroupPtr> brute_classes(const std::vector<PcPresentation>& all) {
    std::map<std::pair<std::vector<std::uint32_t>, std::vector<std::pair<std::uint32_t, std::uint32_t>>>,
             std::vector<GroupPtr>>
        buckets;
    std::vector<GroupPtr> reps;
    for (const auto& pres : all) {
        const auto G = make_group(pres);
        std::vector<std::uint32_t> orders;
        for (Elem x = 0; x < G->order(); ++x) orders.push_back(G->element_order(x));
        std::sort(orders.begin(), orders.end());
        auto& bucket = buckets[{orders, brute_class_profile(G)}];
        bool found = false;
        for (const auto& H : bucket)
            if (brute_isomorphisms(G, H, true)) {
                found = true;
                break;
            }
        if (!found) {
            bucket.push_back(G);
            reps.push_back(G);
        }
    }
    return reps;
}

// Presentation of G on a random pc-sequence refining a random central series:
// built bottom-up from random elements that are central of order p modulo the
// part already chosen.
inline PcPresentation random_representation(const GroupPtr& G, std::mt19937_64& rng) {
    const int p = G->prime();
    const int n = G->ngens();
    std::vector<Elem> chosen;  // bottom-up
    std::vector<char> inside(G->order(), 0);
    inside[0] = 1;
    std::vector<Elem> members{0};
    while (static_cast<int>(chosen.size()) < n) {
        std::vector<Elem> cands;
        for (Elem x = 0; x < G->order(); ++x) {
            if (inside[x] || !inside[G->pow(x, p)]) continue;
            bool central = true;
            for (int i = 0; i < n && central; ++i) central = inside[G->comm(x, G->generator(i))];
            if (central) cands.push_back(x);
        }
        const Elem x = cands[rng() % cands.size()];
        chosen.push_back(x);
        std::vector<Elem> grown;
        for (Elem m : members) {
            Elem y = m;
            for (int e = 0; e < p; ++e) {
                grown.push_back(y);
                y = G->mul(y, x);
            }
        }
        members = grown;
        for (Elem m : members) inside[m] = 1;
    }
    std::vector<Elem> seq(chosen.rbegin(), chosen.rend());
    std::map<Elem, Exponents> exps;
    std::vector<std::pair<Elem, Exponents>> cur{{0, Exponents(static_cast<std::size_t>(n), 0)}};
    for (int k = n - 1; k >= 0; --k) {
        std::vector<std::pair<Elem, Exponents>> next;
        for (int e = 0; e < p; ++e)
            for (auto [x, v] : cur) {
                v[static_cast<std::size_t>(k)] = e;
                next.emplace_back(G->mul(G->pow(seq[static_cast<std::size_t>(k)], e), x), v);
            }
        cur = std::move(next);
    }
    for (auto& [x, v] : cur) exps[x] = v;
    PcPresentation pres(p, n);
    for (int i = 0; i < n; ++i) {
        pres.set_power(i, exps.at(G->pow(seq[static_cast<std::size_t>(i)], p)));
        for (int j = i + 1; j < n; ++j)
            pres.set_commutator(j, i, exps.at(G->comm(seq[static_cast<std::size_t>(j)], seq[static_cast<std::size_t>(i)])));
    }
    return pres;
}

// All pc-presentations on n generators for prime p, consistent ones only.
inline std::vector<PcPresentation> all_consistent_presentations(int p, int n) {
    std::vector<std::pair<int, int>> slots;  // (relation, entry); relation = i for powers, n + j*n + i for comms
    for (int i = 0; i < n; ++i)
        for (int t = i + 1; t < n; ++t) slots.emplace_back(i, t);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            for (int t = j + 1; t < n; ++t) slots.emplace_back(n + j * n + i, t);
    std::vector<PcPresentation> out;
    std::vector<int> digits(slots.size(), 0);
    while (true) {
        PcPresentation pres(p, n);
        std::map<int, Exponents> words;
        for (std::size_t s = 0; s < slots.size(); ++s) {
            auto& w = words.try_emplace(slots[s].first, Exponents(static_cast<std::size_t>(n), 0)).first->second;
            w[static_cast<std::size_t>(slots[s].second)] = digits[s];
        }
        for (auto& [r, w] : words) {
            if (r < n) pres.set_power(r, w);
            else pres.set_commutator((r - n) / n, (r - n) % n, w);
        }
        if (regular_action_consistent(pres)) out.push_back(pres);
        std::size_t s = 0;
        while (s < digits.size() && ++digits[s] == p) digits[s++] = 0;
        if (s == digits.size()) break;
    }
    return out;
}

}  // namespace pgf::testing
