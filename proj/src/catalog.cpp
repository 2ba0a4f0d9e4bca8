#include "pgf/catalog.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "pgf/errors.hpp"
#include "pgf/group.hpp"

namespace pgf {

namespace {

using Vec = std::vector<int>;

int inv_mod(int a, int p) {
    for (int x = 1; x < p; ++x)
        if (a * x % p == 1) return x;
    throw IntegrityError("inverse of zero");
}

// Reduced row echelon form in place (zero rows dropped); returns pivot columns.
std::vector<int> rref(std::vector<Vec>& rows, int p) {
    std::vector<int> pivots;
    std::size_t r = 0;
    const std::size_t cols = rows.empty() ? 0 : rows[0].size();
    for (std::size_t c = 0; c < cols && r < rows.size(); ++c) {
        std::size_t sel = r;
        while (sel < rows.size() && rows[sel][c] == 0) ++sel;
        if (sel == rows.size()) continue;
        std::swap(rows[r], rows[sel]);
        const int s = inv_mod(rows[r][c], p);
        for (auto& v : rows[r]) v = v * s % p;
        for (std::size_t o = 0; o < rows.size(); ++o) {
            if (o == r || rows[o][c] == 0) continue;
            const int f = rows[o][c];
            for (std::size_t k = 0; k < cols; ++k) rows[o][k] = ((rows[o][k] - f * rows[r][k]) % p + p) % p;
        }
        pivots.push_back(static_cast<int>(c));
        ++r;
    }
    rows.resize(r);
    return pivots;
}

// Basis of {t : M t = 0}, M given by rows of length cols.
std::vector<Vec> kernel(std::vector<Vec> M, std::size_t cols, int p) {
    const auto pivots = rref(M, p);
    std::vector<char> is_pivot(cols, 0);
    for (int c : pivots) is_pivot[static_cast<std::size_t>(c)] = 1;
    std::vector<Vec> out;
    for (std::size_t f = 0; f < cols; ++f) {
        if (is_pivot[f]) continue;
        Vec t(cols, 0);
        t[f] = 1;
        for (std::size_t r = 0; r < pivots.size(); ++r) t[static_cast<std::size_t>(pivots[r])] = (p - M[r][f]) % p;
        out.push_back(std::move(t));
    }
    return out;
}

struct Relation {
    int j;  // -1 for the power relation of i
    int i;
};

// Central extensions of Q by a new last generator z, tails t indexed like `rels`.
class ExtensionSpace {
public:
    explicit ExtensionSpace(const PcPresentation& Q) : Q_(Q), p_(Q.prime()), m_(Q.ngens()) {
        for (int i = 0; i < m_; ++i) rels_.push_back({-1, i});
        for (int i = 0; i < m_; ++i)
            for (int j = i + 1; j < m_; ++j) rels_.push_back({j, i});
        const std::size_t R = rels_.size();

        // Defects of the overlap tests are linear in the tails.
        std::vector<Vec> defect_cols;
        for (std::size_t r = 0; r < R; ++r) {
            Vec t(R, 0);
            t[r] = 1;
            const auto pairs = extension(t).overlap_results();
            Vec col;
            for (const auto& [a, b] : pairs) col.push_back(((a.back() - b.back()) % p_ + p_) % p_);
            defect_cols.push_back(std::move(col));
        }
        const std::size_t T = defect_cols.empty() ? 0 : defect_cols[0].size();
        std::vector<Vec> M(T, Vec(R, 0));
        for (std::size_t r = 0; r < R; ++r)
            for (std::size_t k = 0; k < T; ++k) M[k][r] = defect_cols[r][k];
        const auto Z = kernel(M, R, p_);

        // Coboundaries: re-lifting g_k by z changes each tail by minus the exponent of g_k.
        for (int k = 0; k < m_; ++k) {
            Vec v(R, 0);
            for (std::size_t r = 0; r < R; ++r) v[r] = word(r)[static_cast<std::size_t>(k)];
            b_.push_back(std::move(v));
        }
        b_pivots_ = rref(b_, p_);
        for (const auto& z : Z) h_.push_back(reduce(z));
        h_pivots_ = rref(h_, p_);
    }

    int dimension() const { return static_cast<int>(h_.size()); }

    Vec tails_of(const Vec& coords) const {
        Vec t(rels_.size(), 0);
        for (std::size_t i = 0; i < h_.size(); ++i)
            for (std::size_t r = 0; r < t.size(); ++r) t[r] = (t[r] + coords[i] * h_[i][r]) % p_;
        return t;
    }

    PcPresentation extension(const Vec& t) const {
        PcPresentation E(p_, m_ + 1);
        for (std::size_t r = 0; r < rels_.size(); ++r) {
            Exponents w = word(r);
            w.push_back(t[r]);
            if (rels_[r].j < 0)
                E.set_power(rels_[r].i, w);
            else
                E.set_commutator(rels_[r].j, rels_[r].i, w);
        }
        return E;
    }

    // Matrix (column per basis class) of the action of an automorphism of Q,
    // given by the images of the generators as exponent vectors.
    std::vector<Vec> action(const std::vector<Exponents>& images) const {
        std::vector<Vec> cols;
        for (const auto& basis : h_) {
            const PcPresentation E = extension(basis);
            std::vector<Exponents> x;
            for (const auto& img : images) {
                Exponents e = img;
                e.push_back(0);
                x.push_back(std::move(e));
            }
            auto eval = [&](const Exponents& w) {
                Exponents out = E.identity();
                for (int k = 0; k < m_; ++k)
                    if (w[static_cast<std::size_t>(k)])
                        out = E.multiply(out, E.power_of(x[static_cast<std::size_t>(k)], w[static_cast<std::size_t>(k)]));
                return out;
            };
            Vec t(rels_.size(), 0);
            for (std::size_t r = 0; r < rels_.size(); ++r) {
                const auto& rel = rels_[r];
                Exponents u;
                if (rel.j < 0) {
                    u = E.power_of(x[static_cast<std::size_t>(rel.i)], p_);
                } else {
                    const auto& a = x[static_cast<std::size_t>(rel.j)];
                    const auto& b = x[static_cast<std::size_t>(rel.i)];
                    u = E.multiply(E.inverse(E.multiply(b, a)), E.multiply(a, b));
                }
                const Exponents w = eval(word(r));
                for (int k = 0; k < m_; ++k)
                    if (u[static_cast<std::size_t>(k)] != w[static_cast<std::size_t>(k)])
                        throw IntegrityError("central extension: lifted relation leaves the kernel");
                t[r] = ((u.back() - w.back()) % p_ + p_) % p_;
            }
            cols.push_back(coordinates(reduce(t)));
        }
        return cols;
    }

private:
    Exponents word(std::size_t r) const {
        return rels_[r].j < 0 ? Q_.power(rels_[r].i) : Q_.commutator(rels_[r].j, rels_[r].i);
    }

    Vec reduce(Vec t) const {
        for (std::size_t k = 0; k < b_.size(); ++k) {
            const int f = t[static_cast<std::size_t>(b_pivots_[k])];
            if (!f) continue;
            for (std::size_t r = 0; r < t.size(); ++r) t[r] = ((t[r] - f * b_[k][r]) % p_ + p_) % p_;
        }
        return t;
    }

    Vec coordinates(const Vec& reduced) const {
        Vec c;
        for (int piv : h_pivots_) c.push_back(reduced[static_cast<std::size_t>(piv)]);
        // Sanity: the reduced vector must be the combination of the basis.
        if (tails_of(c) != reduced) throw IntegrityError("central extension: class outside the cocycle space");
        return c;
    }

    PcPresentation Q_;
    int p_, m_;
    std::vector<Relation> rels_;
    std::vector<Vec> b_, h_;
    std::vector<int> b_pivots_, h_pivots_;
};

// Projective points of F_p^h, normalized so the first nonzero entry is 1, encoded base p.
std::uint64_t encode(const Vec& c, int p) {
    std::uint64_t x = 0;
    for (int v : c) x = x * static_cast<std::uint64_t>(p) + static_cast<std::uint64_t>(v);
    return x;
}

Vec decode(std::uint64_t x, int h, int p) {
    Vec c(static_cast<std::size_t>(h));
    for (int i = h - 1; i >= 0; --i) {
        c[static_cast<std::size_t>(i)] = static_cast<int>(x % static_cast<std::uint64_t>(p));
        x /= static_cast<std::uint64_t>(p);
    }
    return c;
}

void normalize(Vec& c, int p) {
    for (int v : c)
        if (v) {
            const int s = inv_mod(v, p);
            for (auto& w : c) w = w * s % p;
            return;
        }
}

bool is_normalized(const Vec& c) {
    for (int v : c)
        if (v) return v == 1;
    return false;
}

std::vector<CatalogEntry> enumerate_unchecked(int p, int n, const EnumerateOptions& opts) {
    if (n == 0) {
        CatalogEntry e;
        e.presentation = PcPresentation(p, 0);
        e.code = canonical_code(e.presentation);
        e.index = 1;
        return {e};
    }
    auto parents = enumerate_unchecked(p, n - 1, opts);
    if (opts.reverse_order) std::reverse(parents.begin(), parents.end());
    std::map<CanonicalCode, bool> codes;
    for (const auto& parent : parents)
        for (const auto& ext : central_extensions(parent.presentation, opts)) codes.emplace(canonical_code(ext), true);
    std::vector<CatalogEntry> out;
    for (const auto& [code, unused] : codes) {
        CatalogEntry e;
        e.order = code.order;
        e.index = static_cast<std::uint32_t>(out.size() + 1);
        e.presentation = code.presentation();
        e.code = code;
        out.push_back(std::move(e));
    }
    return out;
}

std::uint32_t ipow(int p, int n) {
    std::uint32_t r = 1;
    for (int i = 0; i < n; ++i) r *= static_cast<std::uint32_t>(p);
    return r;
}

}  // namespace

bool enumeration_feasible(int p, int n, bool allow_long) {
    if (n < 0) return false;
    if (p == 2) return n <= 6 || (allow_long && n == 7);
    return (p == 3 || p == 5 || p == 7) && n <= 4;
}

std::vector<PcPresentation> central_extensions(const PcPresentation& Q, const EnumerateOptions& opts) {
    const int p = Q.prime();
    const ExtensionSpace space(Q);
    const int h = space.dimension();
    std::vector<PcPresentation> out{space.extension(Vec(static_cast<std::size_t>(Q.ngens() * (Q.ngens() + 1) / 2), 0))};
    if (h == 0) return out;

    std::vector<std::vector<Vec>> mats;
    if (opts.orbit_reduction) {
        const auto G = make_group(Q);
        for (const auto& images : canonical_form(G).automorphisms) {
            std::vector<Exponents> ex;
            for (Elem x : images) ex.push_back(G->exponents(x));
            mats.push_back(space.action(ex));
        }
    }
    std::uint64_t total = 1;
    for (int i = 0; i < h; ++i) total *= static_cast<std::uint64_t>(p);
    std::vector<char> seen(total, 0);
    std::vector<std::uint64_t> reps;
    std::vector<std::uint64_t> stack;
    for (std::uint64_t x = 1; x < total; ++x) {
        if (seen[x]) continue;
        const Vec c0 = decode(x, h, p);
        if (!is_normalized(c0)) continue;
        reps.push_back(x);
        seen[x] = 1;
        stack.assign(1, x);
        while (!stack.empty()) {
            const Vec c = decode(stack.back(), h, p);
            stack.pop_back();
            for (const auto& M : mats) {
                Vec d(static_cast<std::size_t>(h), 0);
                for (int col = 0; col < h; ++col) {
                    const int f = c[static_cast<std::size_t>(col)];
                    if (!f) continue;
                    for (int row = 0; row < h; ++row)
                        d[static_cast<std::size_t>(row)] =
                            (d[static_cast<std::size_t>(row)] + f * M[static_cast<std::size_t>(col)][static_cast<std::size_t>(row)]) % p;
                }
                normalize(d, p);
                const auto y = encode(d, p);
                if (!seen[y]) {
                    seen[y] = 1;
                    stack.push_back(y);
                }
            }
        }
    }
    if (opts.reverse_order) std::reverse(reps.begin(), reps.end());
    for (auto x : reps) out.push_back(space.extension(space.tails_of(decode(x, h, p))));
    return out;
}

std::vector<CatalogEntry> enumerate_groups(int p, int n, const EnumerateOptions& opts) {
    if (!is_prime(p)) throw InvalidInput("enumerate: " + std::to_string(p) + " is not prime");
    if (!enumeration_feasible(p, n, opts.allow_long))
        throw BoundExceeded("enumerate: order " + std::to_string(p) + "^" + std::to_string(n) +
                            " is outside the feasible set");
    return enumerate_unchecked(p, n, opts);
}

std::string format_catalog(int p, int n, const std::vector<CatalogEntry>& entries) {
    std::ostringstream out;
    out << "pgf-catalog v1 " << p << ' ' << n << ' ' << entries.size() << '\n';
    for (const auto& e : entries)
        out << e.index << '\t' << e.code.to_string() << '\t' << e.presentation.to_string() << '\n';
    return out.str();
}

void save_catalog(const std::vector<CatalogEntry>& entries, int p, int n, const std::filesystem::path& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw InvalidInput("cannot write " + path.string());
    f << format_catalog(p, n, entries);
    if (!f) throw InvalidInput("write failed: " + path.string());
}

LoadedCatalog parse_catalog(const std::string& text, bool recompute_codes) {
    LoadedCatalog out;
    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.find_first_not_of(" \t\r") != std::string::npos) break;
    }
    if (line.find_first_not_of(" \t\r") == std::string::npos) return out;  // empty file

    std::istringstream head(line);
    std::string magic, version;
    long long count = -1;
    if (!(head >> magic >> version >> out.p >> out.n >> count) || magic != "pgf-catalog")
        throw InvalidInput("catalog line " + std::to_string(lineno) + ": expected 'pgf-catalog v1 p n count'");
    if (version != "v1") throw InvalidInput("catalog: unsupported version '" + version + "'");
    if (!is_prime(out.p) || out.n < 0 || out.n > kMaxGens || count < 0)
        throw InvalidInput("catalog: bad header values");
    const std::uint32_t order = ipow(out.p, out.n);

    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto t1 = line.find('\t');
        const auto t2 = t1 == std::string::npos ? t1 : line.find('\t', t1 + 1);
        if (t2 == std::string::npos)
            throw InvalidInput("catalog line " + std::to_string(lineno) + ": expected index, code and presentation");
        CatalogEntry e;
        try {
            e.index = static_cast<std::uint32_t>(std::stoul(line.substr(0, t1)));
            e.code = CanonicalCode::parse(line.substr(t1 + 1, t2 - t1 - 1));
            e.presentation = PcPresentation::parse(line.substr(t2 + 1));
        } catch (const InvalidInput& err) {
            throw InvalidInput("catalog line " + std::to_string(lineno) + ": " + err.what());
        } catch (const std::logic_error&) {
            throw InvalidInput("catalog line " + std::to_string(lineno) + ": bad index");
        }
        e.order = e.presentation.order();
        const std::string where = "catalog line " + std::to_string(lineno) + ": ";
        if (e.index != out.entries.size() + 1)
            throw IntegrityError(where + "index " + std::to_string(e.index) + " out of sequence");
        if (e.order != order || e.code.order != order) throw IntegrityError(where + "order does not match the header");
        if (!(e.code.presentation() == e.presentation)) throw IntegrityError(where + "code and presentation differ");
        if (!e.presentation.is_consistent()) throw IntegrityError(where + "inconsistent presentation");
        if (!out.entries.empty() && !(out.entries.back().code < e.code))
            throw IntegrityError(where + "codes are not strictly ascending");
        if (recompute_codes && canonical_code(e.presentation) != e.code)
            throw IntegrityError(where + "stored code is not the canonical code");
        out.entries.push_back(std::move(e));
    }
    if (static_cast<long long>(out.entries.size()) != count)
        throw IntegrityError("catalog: header announces " + std::to_string(count) + " entries, found " +
                             std::to_string(out.entries.size()));
    return out;
}

LoadedCatalog load_catalog(const std::filesystem::path& path, bool recompute_codes) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw InvalidInput("cannot read " + path.string());
    std::ostringstream buf;
    buf << f.rdbuf();
    return parse_catalog(buf.str(), recompute_codes);
}

std::filesystem::path catalog_file_name(int p, int n) {
    return "catalog-" + std::to_string(p) + "-" + std::to_string(n) + ".txt";
}

void CatalogSet::add(const LoadedCatalog& c) {
    if (c.entries.empty()) return;
    const std::uint32_t order = c.entries.front().order;
    by_order_[order] = c.entries;
    for (const auto& e : c.entries) by_hash_[e.code.hash()].emplace_back(order, e.index);
}

bool CatalogSet::has_order(std::uint32_t order) const { return by_order_.count(order) > 0; }

std::optional<std::uint32_t> CatalogSet::index_of(const CanonicalCode& code) const {
    auto it = by_hash_.find(code.hash());
    if (it == by_hash_.end()) return std::nullopt;
    for (auto [order, index] : it->second)
        if (order == code.order && by_order_.at(order)[index - 1].code == code) return index;
    return std::nullopt;
}

const std::vector<CatalogEntry>& CatalogSet::entries(std::uint32_t order) const {
    auto it = by_order_.find(order);
    if (it == by_order_.end()) throw InvalidInput("no catalog loaded for order " + std::to_string(order));
    return it->second;
}

std::vector<std::uint32_t> CatalogSet::orders() const {
    std::vector<std::uint32_t> out;
    for (const auto& [o, unused] : by_order_) out.push_back(o);
    return out;
}

CatalogSet CatalogSet::from_directory(const std::filesystem::path& dir, const std::vector<std::pair<int, int>>& wanted,
                                      bool build_missing) {
    CatalogSet set;
    for (auto [p, n] : wanted) {
        const auto path = dir / catalog_file_name(p, n);
        if (std::filesystem::exists(path)) {
            set.add(load_catalog(path));
        } else if (build_missing) {
            const auto entries = enumerate_groups(p, n);
            std::filesystem::create_directories(dir);
            save_catalog(entries, p, n, path);
            set.add(LoadedCatalog{p, n, entries});
        }
    }
    return set;
}

}  // namespace pgf
