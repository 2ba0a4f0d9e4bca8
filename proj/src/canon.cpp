#include "pgf/canon.hpp"

#include <algorithm>
#include <climits>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <unordered_map>

#include "cayley.hpp"
#include "pgf/errors.hpp"
#include "pgf/structure.hpp"
#include "pgf/subgroup.hpp"

namespace pgf {

namespace {

std::uint64_t mix(std::uint64_t h, std::uint64_t v) {
    h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    return h;
}

void check_bound(const GroupPtr& G, std::uint32_t max_order) {
    if (G->order() > max_order)
        throw BoundExceeded("group order " + std::to_string(G->order()) + " exceeds the bound " +
                            std::to_string(max_order));
}

Subgroup span_with(const GroupPtr& G, const Subgroup& base, std::span<const Elem> extra) {
    std::vector<Elem> gens(base.igs().begin(), base.igs().end());
    gens.insert(gens.end(), extra.begin(), extra.end());
    return Subgroup::generated_by(G, gens);
}

std::vector<std::uint32_t> code_bytes(const PcPresentation& pres, const std::vector<int>& layers) {
    std::vector<std::uint32_t> out{CanonicalCode::kVersion, static_cast<std::uint32_t>(layers.size())};
    for (int s : layers) out.push_back(static_cast<std::uint32_t>(s));
    for (int v : pres.serialize()) out.push_back(static_cast<std::uint32_t>(v));
    return out;
}

// Element invariant: class size, order, and recursively the invariant of x^p.
std::vector<std::uint32_t> element_invariants(const GroupPtr& G) {
    const auto& classes = G->classes();
    std::vector<std::uint64_t> cls(classes.size(), 0);
    std::vector<std::size_t> order(classes.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return classes[a].element_order < classes[b].element_order; });
    for (std::size_t c : order) {
        const Elem x = classes[c].representative;
        std::uint64_t h = mix(classes[c].size, classes[c].element_order);
        if (x != 0) h = mix(h, cls[G->class_of(G->pow(x, G->prime()))]);
        cls[c] = h;
    }
    std::vector<std::uint32_t> out(G->order());
    for (Elem x = 0; x < G->order(); ++x) out[x] = static_cast<std::uint32_t>(cls[G->class_of(x)] >> 32);
    return out;
}

class CanonSearch {
public:
    CanonSearch(GroupPtr G, const CanonOptions& opts)
        : G_(std::move(G)), opts_(opts), phi_(frattini_subgroup(G_)), inv_(element_invariants(G_)) {
        d_ = G_->ngens() - phi_.length();
        keys_.resize(static_cast<std::size_t>(d_));
        pos_.assign(static_cast<std::size_t>(d_) + 1, std::vector<std::int32_t>(G_->order(), -1));
    }

    void run() {
        std::vector<Elem> prefix;
        search(0, prefix);
    }

    int rank() const { return d_; }
    const std::vector<Elem>& best() const { return best_tuple_; }
    std::uint64_t leaves() const { return leaves_; }

private:
    static constexpr int kNoJump = INT_MAX;


    int code_of(std::span<const Elem> tuple, const std::vector<std::uint32_t>* ref, std::vector<std::uint32_t>& out) {
        const auto m = [this](std::uint32_t a, std::uint32_t b) { return G_->mul(a, b); };
        return detail::cayley_code(G_->order(), m, 0, tuple, inv_[tuple.back()], scratch_, ref, out);
    }

    // Children of the node with this prefix whose level key is minimal.
    std::vector<Elem> minimal_children(std::vector<Elem>& prefix, std::vector<std::uint32_t>& key) {
        const Subgroup S = span_with(G_, phi_, prefix);
        std::uint32_t best_inv = UINT32_MAX;
        for (Elem x = 0; x < G_->order(); ++x)
            if (!S.contains(x)) best_inv = std::min(best_inv, inv_[x]);
        std::vector<Elem> mins;
        std::vector<std::uint32_t> tmp;
        bool have = false;
        prefix.push_back(0);
        for (Elem x = 0; x < G_->order(); ++x) {
            if (S.contains(x) || inv_[x] != best_inv) continue;
            prefix.back() = x;
            const int c = code_of(prefix, have ? &key : nullptr, tmp);
            if (!have || c < 0) {
                key.swap(tmp);
                mins.assign(1, x);
                have = true;
            } else if (c == 0) {
                mins.push_back(x);
            }
        }
        prefix.pop_back();
        return mins;
    }

    // Lexicographic comparison of the current keys up to level with the best leaf's.
    int compare_with_best(int level) const {
        if (!have_best_) return -1;
        for (int k = 0; k <= level; ++k) {
            const auto& a = keys_[static_cast<std::size_t>(k)];
            const auto& b = best_keys_[static_cast<std::size_t>(k)];
            if (a != b) return a < b ? -1 : 1;
        }
        return 0;
    }

    int search(int level, std::vector<Elem>& prefix) {
        if (level == d_) return leaf(prefix);
        std::vector<std::uint32_t> key;
        const auto mins = minimal_children(prefix, key);
        keys_[static_cast<std::size_t>(level)] = std::move(key);
        if (compare_with_best(level) > 0) return kNoJump;

        // Union-find over mins for orbit pruning by automorphisms fixing the prefix.
        auto& pos = pos_[static_cast<std::size_t>(level)];
        for (std::size_t i = 0; i < mins.size(); ++i) pos[mins[i]] = static_cast<std::int32_t>(i);
        std::vector<std::uint32_t> parent(mins.size());
        std::iota(parent.begin(), parent.end(), 0);
        std::vector<char> done(mins.size(), 0);
        auto find = [&](std::uint32_t a) {
            while (parent[a] != a) a = parent[a] = parent[parent[a]];
            return a;
        };
        std::size_t applied = 0;
        int result = kNoJump;
        for (std::size_t i = 0; i < mins.size(); ++i) {
            for (; applied < autos_perm_.size(); ++applied) {
                const auto& g = autos_perm_[applied];
                bool fixes = true;
                for (Elem a : prefix) fixes = fixes && g[a] == a;
                if (!fixes) continue;
                for (std::size_t k = 0; k < mins.size(); ++k) {
                    const std::int32_t j = pos[g[mins[k]]];
                    if (j < 0) continue;
                    const auto ra = find(static_cast<std::uint32_t>(k)), rb = find(static_cast<std::uint32_t>(j));
                    if (ra != rb) {
                        parent[ra] = rb;
                        done[rb] = static_cast<char>(done[rb] | done[ra]);
                    }
                }
            }
            const auto r = find(static_cast<std::uint32_t>(i));
            if (done[r]) continue;
            done[r] = 1;
            prefix.push_back(mins[i]);
            const int jump = search(level + 1, prefix);
            prefix.pop_back();
            if (jump < level) {
                result = jump;
                break;
            }
        }
        for (Elem x : mins) pos[x] = -1;
        return result;
    }

    int leaf(const std::vector<Elem>& tuple) {
        ++leaves_;
        if (d_ == 0) {
            have_best_ = true;
            return kNoJump;
        }
        const auto& final_code = keys_.back();
        std::uint64_t h = 0;
        for (auto v : final_code) h = mix(h, v);
        auto& bucket = leaf_map_[h];
        for (const auto& other : bucket) {
            std::vector<std::uint32_t> code;
            code_of(other, nullptr, code);
            if (code != final_code) continue;
            const std::vector<std::uint32_t> q_other = scratch_.queue;
            code_of(tuple, nullptr, code);
            record_automorphism(q_other, scratch_.queue);
            std::size_t j = 0;
            while (tuple[j] == other[j]) ++j;
            return static_cast<int>(j);
        }
        bucket.push_back(tuple);
        if (compare_with_best(d_ - 1) < 0) {
            have_best_ = true;
            best_tuple_ = tuple;
            best_keys_ = keys_;
        }
        return kNoJump;
    }

    void record_automorphism(const std::vector<std::uint32_t>& from, const std::vector<std::uint32_t>& to) {
        if (autos_perm_.size() >= opts_.max_stored_automorphisms) return;
        std::vector<Elem> perm(G_->order());
        for (std::size_t i = 0; i < from.size(); ++i) perm[from[i]] = to[i];
        autos_perm_.push_back(std::move(perm));
    }

public:
    std::vector<std::vector<Elem>> automorphism_images() const {
        std::vector<std::vector<Elem>> out;
        for (const auto& g : autos_perm_) {
            std::vector<Elem> img;
            for (int i = 0; i < G_->ngens(); ++i) img.push_back(g[G_->generator(i)]);
            out.push_back(std::move(img));
        }
        return out;
    }

private:
    GroupPtr G_;
    CanonOptions opts_;
    Subgroup phi_;
    std::vector<std::uint32_t> inv_;
    int d_ = 0;
    detail::CayleyScratch scratch_;
    std::vector<std::vector<std::uint32_t>> keys_, best_keys_;
    std::vector<std::vector<std::int32_t>> pos_;
    std::vector<Elem> best_tuple_;
    bool have_best_ = false;
    std::unordered_map<std::uint64_t, std::vector<std::vector<Elem>>> leaf_map_;
    std::vector<std::vector<Elem>> autos_perm_;
    std::uint64_t leaves_ = 0;
};

// Decimal rendering of a base-2^16 number given most significant digit first.
std::string to_decimal(const std::vector<std::uint32_t>& digits) {
    std::vector<std::uint32_t> acc{0};  // base 1e9, least significant first
    for (std::uint32_t dgt : digits) {
        std::uint64_t carry = dgt;
        for (auto& limb : acc) {
            const std::uint64_t v = static_cast<std::uint64_t>(limb) * 65536 + carry;
            limb = static_cast<std::uint32_t>(v % 1000000000);
            carry = v / 1000000000;
        }
        while (carry) {
            acc.push_back(static_cast<std::uint32_t>(carry % 1000000000));
            carry /= 1000000000;
        }
    }
    std::string out = std::to_string(acc.back());
    for (std::size_t i = acc.size() - 1; i-- > 0;) {
        std::string part = std::to_string(acc[i]);
        out += std::string(9 - part.size(), '0') + part;
    }
    return out;
}

}  // namespace

std::string CanonicalCode::to_string() const {
    std::ostringstream out;
    out << 'v' << kVersion << ' ' << bytes.size();
    for (auto b : bytes) out << ' ' << b;
    return out.str();
}

CanonicalCode CanonicalCode::parse(std::string_view text) {
    std::istringstream in{std::string(text)};
    std::string version;
    std::size_t len = 0;
    if (!(in >> version) || version != "v1") throw InvalidInput("canonical code: expected version tag v1");
    if (!(in >> len) || len > 100000) throw InvalidInput("canonical code: bad length");
    CanonicalCode code;
    for (std::size_t i = 0; i < len; ++i) {
        long long v = 0;
        if (!(in >> v) || v < 0 || v > 0xffffffffLL)
            throw InvalidInput("canonical code: expected " + std::to_string(len) + " entries");
        code.bytes.push_back(static_cast<std::uint32_t>(v));
    }
    std::string extra;
    if (in >> extra) throw InvalidInput("canonical code: trailing data '" + extra + "'");
    code.order = code.presentation().order();
    return code;
}

PcPresentation CanonicalCode::presentation() const {
    std::size_t at = 0;
    auto next = [&]() -> std::uint32_t {
        if (at >= bytes.size()) throw InvalidInput("canonical code: truncated");
        return bytes[at++];
    };
    if (next() != kVersion) throw InvalidInput("canonical code: unsupported version");
    const std::uint32_t layers = next();
    std::uint32_t total = 0;
    for (std::uint32_t i = 0; i < layers; ++i) total += next();
    const auto p = static_cast<int>(next());
    const auto n = static_cast<int>(next());
    if (total != static_cast<std::uint32_t>(n) || n < 0 || n > kMaxGens)
        throw InvalidInput("canonical code: layer sizes do not add up");
    PcPresentation pres(p, n);
    auto read_word = [&](int after) {
        Exponents w(static_cast<std::size_t>(n), 0);
        for (int t = after + 1; t < n; ++t) w[static_cast<std::size_t>(t)] = static_cast<int>(next());
        return w;
    };
    for (int i = 0; i < n; ++i) pres.set_power(i, read_word(i));
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) pres.set_commutator(j, i, read_word(j));
    if (at != bytes.size()) throw InvalidInput("canonical code: trailing entries");
    return pres;
}

std::uint64_t CanonicalCode::hash() const noexcept {
    std::uint64_t h = order;
    for (auto b : bytes) h = mix(h, b);
    return h;
}

PcPresentation weighted_presentation(const GroupPtr& G, const std::vector<Elem>& tuple, std::vector<Elem>* sequence,
                                     std::vector<int>* layer_sizes) {
    const int p = G->prime();
    const auto P = series(G, SeriesKind::lower_exponent_p).terms;
    if (P.size() < 2) {
        if (sequence) sequence->clear();
        if (layer_sizes) layer_sizes->clear();
        return PcPresentation(p, 0);
    }
    if (span_with(G, P[1], tuple).order() != G->order() ||
        static_cast<int>(tuple.size()) != G->ngens() - P[1].length())
        throw InvalidInput("weighted presentation: tuple is not a minimal generating set");

    std::vector<std::vector<Elem>> layers{tuple};
    for (std::size_t i = 1; i + 1 < P.size(); ++i) {
        const auto& prev = layers.back();
        std::vector<Elem> cands;
        for (Elem y : prev) cands.push_back(G->pow(y, p));
        if (i == 1) {
            for (std::size_t k = 0; k < tuple.size(); ++k)
                for (std::size_t j = 0; j < k; ++j) cands.push_back(G->comm(tuple[k], tuple[j]));
        } else {
            for (Elem y : prev)
                for (Elem a : tuple) cands.push_back(G->comm(y, a));
        }
        std::vector<Elem> layer;
        Subgroup S = P[i + 1];
        for (Elem c : cands) {
            if (S.order() == P[i].order()) break;
            if (S.contains(c)) continue;
            layer.push_back(c);
            S = span_with(G, P[i + 1], layer);
        }
        if (S.order() != P[i].order()) throw IntegrityError("weighted presentation: layer does not span");
        layers.push_back(std::move(layer));
    }

    std::vector<Elem> seq;
    std::vector<int> sizes;
    for (const auto& l : layers) {
        seq.insert(seq.end(), l.begin(), l.end());
        sizes.push_back(static_cast<int>(l.size()));
    }
    const int n = static_cast<int>(seq.size());
    if (n != G->ngens()) throw IntegrityError("weighted presentation: wrong composition length");

    // Normal-form codes of every element with respect to seq.
    std::vector<std::uint32_t> code(G->order(), UINT32_MAX);
    std::vector<std::pair<Elem, std::uint32_t>> cur{{0, 0}}, nxt;
    std::uint32_t place = 1;
    for (int k = n - 1; k >= 0; --k, place *= static_cast<std::uint32_t>(p)) {
        nxt = cur;
        Elem pw = 0;
        for (int e = 1; e < p; ++e) {
            pw = G->mul(pw, seq[static_cast<std::size_t>(k)]);
            for (const auto& [x, c] : cur) nxt.emplace_back(G->mul(pw, x), c + static_cast<std::uint32_t>(e) * place);
        }
        cur.swap(nxt);
    }
    for (const auto& [x, c] : cur) {
        if (code[x] != UINT32_MAX) throw IntegrityError("weighted presentation: not a pc-sequence");
        code[x] = c;
    }
    auto exps = [&](Elem x) {
        Exponents e(static_cast<std::size_t>(n));
        std::uint32_t c = code[x];
        for (int i = n - 1; i >= 0; --i) {
            e[static_cast<std::size_t>(i)] = static_cast<int>(c % static_cast<std::uint32_t>(p));
            c /= static_cast<std::uint32_t>(p);
        }
        return e;
    };
    PcPresentation pres(p, n);
    for (int i = 0; i < n; ++i) {
        pres.set_power(i, exps(G->pow(seq[static_cast<std::size_t>(i)], p)));
        for (int j = i + 1; j < n; ++j)
            pres.set_commutator(j, i, exps(G->comm(seq[static_cast<std::size_t>(j)], seq[static_cast<std::size_t>(i)])));
    }
    if (sequence) *sequence = std::move(seq);
    if (layer_sizes) *layer_sizes = std::move(sizes);
    return pres;
}

CanonicalForm canonical_form(const GroupPtr& G, const CanonOptions& opts) {
    check_bound(G, opts.max_order);
    CanonSearch search(G, opts);
    search.run();
    CanonicalForm out;
    out.tuple = search.best();
    std::vector<int> layers;
    out.presentation = weighted_presentation(G, out.tuple, &out.pc_sequence, &layers);
    out.code.bytes = code_bytes(out.presentation, layers);
    out.code.order = G->order();
    out.automorphisms = search.automorphism_images();
    out.leaves = search.leaves();
    return out;
}

CanonicalCode canonical_code(const GroupPtr& G, const CanonOptions& opts) { return canonical_form(G, opts).code; }

CanonicalCode canonical_code(const PcPresentation& pres, const CanonOptions& opts) {
    if (pres.order() > opts.max_order)
        throw BoundExceeded("group order " + std::to_string(pres.order()) + " exceeds the bound " +
                            std::to_string(opts.max_order));
    return canonical_code(make_group(pres), opts);
}

std::optional<std::vector<Elem>> extend_to_isomorphism(const GroupPtr& G, const GroupPtr& H,
                                                       const std::vector<Elem>& images) {
    if (G->order() != H->order() || static_cast<int>(images.size()) != G->ngens()) return std::nullopt;
    std::vector<Elem> phi(G->order(), UINT32_MAX);
    std::vector<char> hit(H->order(), 0);
    std::vector<Elem> queue{0};
    phi[0] = 0;
    for (std::size_t head = 0; head < queue.size(); ++head) {
        const Elem x = queue[head];
        for (int i = 0; i < G->ngens(); ++i) {
            const Elem y = G->mul(x, G->generator(i));
            const Elem img = H->mul(phi[x], images[static_cast<std::size_t>(i)]);
            if (phi[y] == UINT32_MAX) {
                phi[y] = img;
                queue.push_back(y);
            } else if (phi[y] != img) {
                return std::nullopt;
            }
        }
    }
    for (Elem x = 0; x < G->order(); ++x) {
        if (phi[x] == UINT32_MAX || hit[phi[x]]) return std::nullopt;
        hit[phi[x]] = 1;
    }
    return phi;
}

std::optional<std::vector<Elem>> is_isomorphic(const GroupPtr& G, const GroupPtr& H, const CanonOptions& opts) {
    check_bound(G, opts.max_order);
    check_bound(H, opts.max_order);
    if (G->order() != H->order() || G->prime() != H->prime()) return std::nullopt;
    if (element_order_multiset(G) != element_order_multiset(H)) return std::nullopt;
    auto profile = [](const GroupPtr& X) {
        std::vector<std::pair<std::uint32_t, std::uint32_t>> v;
        for (const auto& c : X->classes()) v.emplace_back(c.size, c.element_order);
        std::sort(v.begin(), v.end());
        return v;
    };
    if (profile(G) != profile(H)) return std::nullopt;
    const auto fg = canonical_form(G, opts);
    const auto fh = canonical_form(H, opts);
    if (fg.code != fh.code) return std::nullopt;
    // Same presentation on both pc-sequences: map one onto the other.
    const auto pg = make_group(fg.presentation);
    auto to_g = extend_to_isomorphism(pg, G, fg.pc_sequence);
    auto to_h = extend_to_isomorphism(pg, H, fh.pc_sequence);
    if (!to_g || !to_h) throw IntegrityError("is_isomorphic: canonical pc-sequence does not define an isomorphism");
    std::vector<Elem> g_to_h(G->order());
    for (Elem x = 0; x < pg->order(); ++x) g_to_h[(*to_g)[x]] = (*to_h)[x];
    std::vector<Elem> images;
    for (int i = 0; i < G->ngens(); ++i) images.push_back(g_to_h[G->generator(i)]);
    if (!extend_to_isomorphism(G, H, images)) throw IntegrityError("is_isomorphic: witness failed verification");
    return images;
}

std::string random_pc_code(const GroupPtr& G, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    const Subgroup phi = frattini_subgroup(G);
    const int d = G->ngens() - phi.length();
    std::uniform_int_distribution<Elem> pick(0, G->order() - 1);
    std::vector<Elem> tuple(static_cast<std::size_t>(d));
    do {
        for (auto& x : tuple) x = pick(rng);
    } while (span_with(G, phi, tuple).order() != G->order());
    std::vector<int> layers;
    const auto pres = weighted_presentation(G, tuple, nullptr, &layers);
    return to_decimal(code_bytes(pres, layers));
}

RandomIsoVerdict random_iso_test(const GroupPtr& G, const GroupPtr& H, int budget, std::uint64_t seed) {
    if (budget < 1) throw InvalidInput("random_iso_test: budget must be at least 1");
    if (G->order() != H->order() || G->prime() != H->prime()) return {false, 0};
    std::set<std::string> seen_g, seen_h;
    std::mt19937_64 seeds(seed);
    for (int round = 1; round <= budget; ++round) {
        const auto cg = random_pc_code(G, seeds());
        const auto ch = random_pc_code(H, seeds());
        seen_g.insert(cg);
        seen_h.insert(ch);
        if (seen_h.count(cg) || seen_g.count(ch)) return {true, round};
    }
    return {is_isomorphic(G, H).has_value(), 0};
}

}  // namespace pgf
