#include "pgf/chartab.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <mutex>
#include <numeric>
#include <random>
#include <sstream>

#include "pgf/errors.hpp"

namespace pgf {

namespace {

using i64 = long long;

std::vector<i64> cyclotomic_poly_uncached(std::uint32_t m, std::map<std::uint32_t, std::vector<i64>>& cache) {
    // Phi_m = (x^m - 1) / prod_{d | m, d < m} Phi_d
    std::vector<i64> num(m + 1, 0);
    num[0] = -1;
    num[m] = 1;
    for (std::uint32_t d = 1; d < m; ++d) {
        if (m % d) continue;
        auto it = cache.find(d);
        if (it == cache.end()) it = cache.emplace(d, cyclotomic_poly_uncached(d, cache)).first;
        const auto& den = it->second;
        const std::size_t dd = den.size() - 1;
        std::vector<i64> q(num.size() - dd, 0);
        for (std::size_t i = num.size(); i-- > dd;) {
            const i64 c = num[i];
            q[i - dd] = c;
            for (std::size_t k = 0; k <= dd; ++k) num[i - dd + k] -= c * den[k];
        }
        num = std::move(q);
    }
    return num;
}

const std::vector<i64>& cyclotomic_poly(std::uint32_t m) {
    static std::map<std::uint32_t, std::vector<i64>> cache;
    static std::mutex mu;
    std::lock_guard lock(mu);
    auto it = cache.find(m);
    if (it == cache.end()) it = cache.emplace(m, cyclotomic_poly_uncached(m, cache)).first;
    return it->second;
}

void reduce_in_place(std::uint32_t m, std::vector<i64>& a) {
    const auto& phi = cyclotomic_poly(m);
    const std::size_t deg = phi.size() - 1;
    for (std::size_t i = a.size(); i-- > deg;) {
        const i64 c = a[i];
        if (!c) continue;
        for (std::size_t k = 0; k <= deg; ++k) a[i - deg + k] -= c * phi[k];
    }
}

i64 mod_pow(i64 b, i64 e, i64 q) {
    i64 r = 1;
    b %= q;
    if (b < 0) b += q;
    for (; e; e >>= 1, b = b * b % q)
        if (e & 1) r = r * b % q;
    return r;
}

i64 mod_inv(i64 a, i64 q) { return mod_pow(a, q - 2, q); }

i64 primitive_root(i64 q) {
    std::vector<i64> factors;
    i64 n = q - 1;
    for (i64 f = 2; f * f <= n; ++f)
        if (n % f == 0) {
            factors.push_back(f);
            while (n % f == 0) n /= f;
        }
    if (n > 1) factors.push_back(n);
    for (i64 g = 2;; ++g)
        if (std::all_of(factors.begin(), factors.end(), [&](i64 f) { return mod_pow(g, (q - 1) / f, q) != 1; }))
            return g;
}

using Vec = std::vector<i64>;
using Mat = std::vector<Vec>;

// Row-reduces in place; returns pivot columns. Zero rows are dropped.
std::vector<std::size_t> rref(Mat& rows, i64 q) {
    std::vector<std::size_t> pivots;
    if (rows.empty()) return pivots;
    const std::size_t ncols = rows[0].size();
    std::size_t r = 0;
    for (std::size_t c = 0; c < ncols && r < rows.size(); ++c) {
        std::size_t sel = r;
        while (sel < rows.size() && rows[sel][c] == 0) ++sel;
        if (sel == rows.size()) continue;
        std::swap(rows[r], rows[sel]);
        const i64 iv = mod_inv(rows[r][c], q);
        for (auto& v : rows[r]) v = v * iv % q;
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (i == r || rows[i][c] == 0) continue;
            const i64 f = rows[i][c];
            for (std::size_t k = c; k < ncols; ++k) rows[i][k] = ((rows[i][k] - f * rows[r][k]) % q + q) % q;
        }
        pivots.push_back(c);
        ++r;
    }
    rows.resize(r);
    return pivots;
}

// Null space basis of a square matrix.
Mat kernel(Mat a, i64 q) {
    const std::size_t n = a.size();
    const auto piv = rref(a, q);
    std::vector<int> is_piv(n, -1);
    for (std::size_t i = 0; i < piv.size(); ++i) is_piv[piv[i]] = static_cast<int>(i);
    Mat out;
    for (std::size_t f = 0; f < n; ++f) {
        if (is_piv[f] >= 0) continue;
        Vec v(n, 0);
        v[f] = 1;
        for (std::size_t i = 0; i < piv.size(); ++i) v[piv[i]] = (q - a[i][f]) % q;
        out.push_back(std::move(v));
    }
    return out;
}

Vec char_poly(Mat h, i64 q) {
    const std::size_t n = h.size();
    // reduce to upper Hessenberg form by similarity
    for (std::size_t j = 0; j + 2 < n; ++j) {
        std::size_t i = j + 1;
        while (i < n && h[i][j] == 0) ++i;
        if (i == n) continue;
        if (i != j + 1) {
            std::swap(h[i], h[j + 1]);
            for (auto& row : h) std::swap(row[i], row[j + 1]);
        }
        const i64 iv = mod_inv(h[j + 1][j], q);
        for (std::size_t k = j + 2; k < n; ++k) {
            if (h[k][j] == 0) continue;
            const i64 u = h[k][j] * iv % q;
            for (std::size_t c = 0; c < n; ++c) h[k][c] = ((h[k][c] - u * h[j + 1][c]) % q + q) % q;
            for (std::size_t r = 0; r < n; ++r) h[r][j + 1] = (h[r][j + 1] + u * h[r][k]) % q;
        }
    }
    // p_k = char poly of the leading k x k block, coefficients low to high
    std::vector<Vec> p(n + 1);
    p[0] = {1};
    for (std::size_t k = 0; k < n; ++k) {
        Vec next(k + 2, 0);
        for (std::size_t d = 0; d <= k; ++d) {
            next[d + 1] = (next[d + 1] + p[k][d]) % q;
            next[d] = ((next[d] - h[k][k] * p[k][d]) % q + q) % q;
        }
        i64 prod = 1;
        for (std::size_t i = k; i-- > 0;) {
            prod = prod * h[i + 1][i] % q;
            if (prod == 0) break;
            const i64 f = prod * h[i][k] % q;
            for (std::size_t d = 0; d < p[i].size(); ++d) next[d] = ((next[d] - f * p[i][d]) % q + q) % q;
        }
        p[k + 1] = std::move(next);
    }
    return p[n];
}

struct Space {
    Mat basis;  // rref rows
    std::vector<std::size_t> pivots;
};

// Splits each multi-dimensional space into eigenspaces of op.
void split_spaces(std::vector<Space>& spaces, const Mat& op, i64 q) {
    std::vector<Space> out;
    for (auto& sp : spaces) {
        const std::size_t d = sp.basis.size();
        if (d == 1) {
            out.push_back(std::move(sp));
            continue;
        }
        const std::size_t r = op.size();
        Mat B(d, Vec(d, 0));
        for (std::size_t i = 0; i < d; ++i) {
            Vec img(r, 0);
            for (std::size_t k = 0; k < r; ++k) {
                i64 s = 0;
                for (std::size_t l = 0; l < r; ++l)
                    if (sp.basis[i][l]) s += op[k][l] * sp.basis[i][l] % q;
                img[k] = s % q;
            }
            for (std::size_t k = 0; k < d; ++k) B[k][i] = img[sp.pivots[k]];
        }
        const Vec cp = char_poly(B, q);
        std::vector<i64> roots;
        for (i64 x = 0; x < q; ++x) {
            i64 v = 0;
            for (std::size_t k = cp.size(); k-- > 0;) v = (v * x + cp[k]) % q;
            if (v == 0) roots.push_back(x);
        }
        if (roots.size() <= 1) {
            out.push_back(std::move(sp));
            continue;
        }
        std::size_t total = 0;
        for (i64 lam : roots) {
            Mat shifted = B;
            for (std::size_t k = 0; k < d; ++k) shifted[k][k] = (shifted[k][k] - lam + q) % q;
            Space child;
            for (const auto& x : kernel(shifted, q)) {
                Vec v(r, 0);
                for (std::size_t i = 0; i < d; ++i)
                    if (x[i])
                        for (std::size_t l = 0; l < r; ++l) v[l] = (v[l] + x[i] * sp.basis[i][l]) % q;
                child.basis.push_back(std::move(v));
            }
            child.pivots = rref(child.basis, q);
            total += child.basis.size();
            out.push_back(std::move(child));
        }
        if (total != d) throw IntegrityError("character table: class algebra did not split");
    }
    spaces = std::move(out);
}

std::vector<int> primes_up_to(std::uint32_t n) {
    std::vector<int> out;
    for (int k = 2; k <= static_cast<int>(n); ++k)
        if (is_prime(k)) out.push_back(k);
    return out;
}

CyclotomicValue lift(const CyclotomicValue& v, std::uint32_t M) {
    if (v.m == M) return v;
    std::vector<i64> a(M, 0);
    const std::uint32_t f = M / v.m;
    for (std::size_t t = 0; t < v.coefficients.size(); ++t) a[t * f] += v.coefficients[t];
    reduce_in_place(M, a);
    return CyclotomicValue{M, std::move(a)};
}

}  // namespace

CyclotomicValue CyclotomicValue::from_exponent_counts(std::uint32_t m, const std::vector<long long>& mult) {
    if (m == 0 || mult.size() != m) throw InvalidInput("cyclotomic: coefficient vector length must equal m");
    CyclotomicValue v{m, mult};
    reduce_in_place(m, v.coefficients);
    return v;
}

CyclotomicValue CyclotomicValue::integer(std::uint32_t m, long long value) {
    std::vector<i64> a(m, 0);
    a[0] = value;
    return CyclotomicValue{m, std::move(a)};
}

CyclotomicValue CyclotomicValue::operator+(const CyclotomicValue& o) const {
    if (m != o.m) throw InvalidInput("cyclotomic: mismatched m");
    CyclotomicValue r = *this;
    for (std::size_t i = 0; i < m; ++i) r.coefficients[i] += o.coefficients[i];
    return r;
}

CyclotomicValue CyclotomicValue::operator*(const CyclotomicValue& o) const {
    if (m != o.m) throw InvalidInput("cyclotomic: mismatched m");
    std::vector<i64> a(m, 0);
    for (std::size_t i = 0; i < m; ++i) {
        if (!coefficients[i]) continue;
        for (std::size_t j = 0; j < m; ++j)
            if (o.coefficients[j]) a[(i + j) % m] += coefficients[i] * o.coefficients[j];
    }
    reduce_in_place(m, a);
    return CyclotomicValue{m, std::move(a)};
}

CyclotomicValue CyclotomicValue::conjugate() const {
    std::vector<i64> a(m, 0);
    for (std::size_t i = 0; i < m; ++i) a[(m - i) % m] += coefficients[i];
    reduce_in_place(m, a);
    return CyclotomicValue{m, std::move(a)};
}

bool CyclotomicValue::is_integer() const {
    return std::all_of(coefficients.begin() + 1, coefficients.end(), [](i64 c) { return c == 0; });
}

std::string CyclotomicValue::to_string() const {
    std::size_t len = coefficients.size();
    while (len > 1 && coefficients[len - 1] == 0) --len;
    std::string s;
    for (std::size_t i = 0; i < len; ++i) {
        if (i) s += ',';
        s += std::to_string(coefficients[i]);
    }
    return s;
}

CyclotomicValue CyclotomicValue::parse(std::uint32_t m, std::string_view text) {
    std::vector<i64> a;
    std::size_t pos = 0;
    while (true) {
        const auto comma = text.find(',', pos);
        const auto tok = text.substr(pos, comma == std::string_view::npos ? std::string_view::npos : comma - pos);
        i64 v = 0;
        const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
        if (tok.empty() || ec != std::errc{} || ptr != tok.data() + tok.size())
            throw InvalidInput("cyclotomic: bad coefficient '" + std::string(tok) + "'");
        a.push_back(v);
        if (comma == std::string_view::npos) break;
        pos = comma + 1;
    }
    if (m == 0 || a.size() > m) throw InvalidInput("cyclotomic: too many coefficients");
    a.resize(m, 0);
    auto copy = a;
    reduce_in_place(m, copy);
    if (copy != a) throw InvalidInput("cyclotomic: value is not in reduced form");
    return CyclotomicValue{m, std::move(a)};
}

std::vector<std::uint32_t> power_map(const GroupPtr& G, long long n) {
    const auto& cls = G->classes();
    std::vector<std::uint32_t> out(cls.size());
    for (std::size_t c = 0; c < cls.size(); ++c) out[c] = G->class_of(G->pow(cls[c].representative, n));
    return out;
}

std::vector<long long> CharacterTable::degrees() const {
    std::vector<long long> out;
    for (const auto& row : irreducibles) out.push_back(row.empty() ? 0 : row[0].coefficients[0]);
    return out;
}

CharacterTable character_table(const GroupPtr& G, const CharTableOptions& opts) {
    const auto& cls = G->classes();
    const std::size_t r = cls.size();
    if (r > opts.max_classes)
        throw BoundExceeded("character table: " + std::to_string(r) + " classes exceeds the bound of " +
                            std::to_string(opts.max_classes));
    const std::uint32_t order = G->order();
    const std::uint32_t e = G->exponent();

    i64 q = e + 1;
    while (!(is_prime(static_cast<int>(q)) && q * q > 4LL * order)) q += e;

    // structure constants a[j][k][l] = #{x in C_j : x^-1 z_l in C_k}
    std::vector<std::uint32_t> a(r * r * r, 0);
    for (std::size_t l = 0; l < r; ++l) {
        const Elem z = cls[l].representative;
        for (Elem x = 0; x < order; ++x)
            ++a[(G->class_of(x) * r + G->class_of(G->mul(G->inv(x), z))) * r + l];
    }
    auto class_matrix = [&](std::size_t j, i64 coef, Mat& acc) {
        for (std::size_t k = 0; k < r; ++k)
            for (std::size_t l = 0; l < r; ++l) acc[k][l] = (acc[k][l] + coef * a[(j * r + k) * r + l]) % q;
    };

    std::vector<Space> spaces(1);
    for (std::size_t i = 0; i < r; ++i) {
        Vec v(r, 0);
        v[i] = 1;
        spaces[0].basis.push_back(std::move(v));
        spaces[0].pivots.push_back(i);
    }
    auto done = [&] { return spaces.size() == r; };
    std::mt19937_64 rng(0x5eed);
    for (int round = 0; round < 2 && !done(); ++round) {
        Mat op(r, Vec(r, 0));
        for (std::size_t j = 0; j < r; ++j) class_matrix(j, static_cast<i64>(rng() % static_cast<std::uint64_t>(q)), op);
        split_spaces(spaces, op, q);
    }
    for (std::size_t j = 1; j < r && !done(); ++j) {
        Mat op(r, Vec(r, 0));
        class_matrix(j, 1, op);
        split_spaces(spaces, op, q);
    }
    if (!done()) throw IntegrityError("character table: could not separate the irreducible characters");

    std::vector<std::size_t> inverse_class(r);
    for (std::size_t k = 0; k < r; ++k) inverse_class[k] = G->class_of(G->inv(cls[k].representative));
    std::vector<std::vector<std::uint32_t>> pow_class(e, std::vector<std::uint32_t>(r));
    for (std::size_t k = 0; k < r; ++k) {
        Elem y = 0;
        for (std::uint32_t s = 0; s < e; ++s) {
            pow_class[s][k] = G->class_of(y);
            y = G->mul(y, cls[k].representative);
        }
    }
    const i64 Z = mod_pow(primitive_root(q), (q - 1) / e, q);
    const i64 Zinv = mod_inv(Z, q);
    const i64 einv = mod_inv(e, q);

    CharacterTable t;
    t.group_order = order;
    t.exponent = e;
    t.classes = cls;
    for (auto& sp : spaces) {
        Vec w = sp.basis[0];
        if (w[0] == 0) throw IntegrityError("character table: degenerate central character");
        const i64 n0 = mod_inv(w[0], q);
        for (auto& v : w) v = v * n0 % q;
        i64 S = 0;
        for (std::size_t k = 0; k < r; ++k) S = (S + w[k] * w[inverse_class[k]] % q * mod_inv(cls[k].size, q)) % q;
        const i64 d2 = static_cast<i64>(order) % q * mod_inv(S, q) % q;
        i64 deg = 0;
        for (i64 d = 1; d * d <= order; ++d)
            if (d * d % q == d2 && order % d == 0) {
                deg = d;
                break;
            }
        if (!deg) throw IntegrityError("character table: degree recovery failed");
        Vec chi(r);
        for (std::size_t k = 0; k < r; ++k) chi[k] = w[k] * deg % q * mod_inv(cls[k].size, q) % q;
        std::vector<CyclotomicValue> row;
        for (std::size_t k = 0; k < r; ++k) {
            std::vector<i64> mult(e, 0);
            i64 sum = 0;
            for (std::uint32_t tt = 0; tt < e; ++tt) {
                i64 acc = 0;
                const i64 step = mod_pow(Zinv, tt, q);
                i64 zp = 1;
                for (std::uint32_t s = 0; s < e; ++s) {
                    acc = (acc + chi[pow_class[s][k]] * zp) % q;
                    zp = zp * step % q;
                }
                mult[tt] = acc * einv % q;
                if (mult[tt] > deg) throw IntegrityError("character table: eigenvalue multiplicity out of range");
                sum += mult[tt];
            }
            if (sum != deg) throw IntegrityError("character table: eigenvalue multiplicities do not sum to the degree");
            row.push_back(CyclotomicValue::from_exponent_counts(e, mult));
        }
        t.irreducibles.push_back(std::move(row));
    }
    std::sort(t.irreducibles.begin(), t.irreducibles.end(), [&](const auto& x, const auto& y) {
        const bool xt = std::all_of(x.begin(), x.end(), [&](const auto& v) { return v == x[0]; });
        const bool yt = std::all_of(y.begin(), y.end(), [&](const auto& v) { return v == y[0]; });
        const auto kx = std::make_tuple(x[0].coefficients[0], !xt);
        const auto ky = std::make_tuple(y[0].coefficients[0], !yt);
        if (kx != ky) return kx < ky;
        return x < y;
    });
    for (int n : primes_up_to(std::max<std::uint32_t>(e, static_cast<std::uint32_t>(G->prime()))))
        t.power_maps[n] = power_map(G, n);
    return t;
}

bool CharacterTable::verify() const {
    const std::size_t r = classes.size();
    if (irreducibles.size() != r) return false;
    const std::uint32_t m = exponent;
    std::vector<std::vector<CyclotomicValue>> conj(r);
    for (std::size_t i = 0; i < r; ++i) {
        if (irreducibles[i].size() != r) return false;
        for (const auto& v : irreducibles[i]) {
            if (v.m != m) return false;
            conj[i].push_back(v.conjugate());
        }
    }
    auto accumulate = [&](std::vector<i64>& acc, const CyclotomicValue& x, const CyclotomicValue& y, i64 w) {
        for (std::size_t s = 0; s < m; ++s) {
            if (!x.coefficients[s]) continue;
            const i64 xs = x.coefficients[s] * w;
            for (std::size_t u = 0; u < m; ++u)
                if (y.coefficients[u]) acc[(s + u) % m] += xs * y.coefficients[u];
        }
    };
    auto equals_integer = [&](std::vector<i64>& acc, i64 v) {
        reduce_in_place(m, acc);
        if (acc[0] != v) return false;
        return std::all_of(acc.begin() + 1, acc.end(), [](i64 c) { return c == 0; });
    };
    i64 squares = 0;
    for (const auto& row : irreducibles) squares += row[0].coefficients[0] * row[0].coefficients[0];
    if (squares != group_order) return false;
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = i; j < r; ++j) {
            std::vector<i64> acc(m, 0);
            for (std::size_t k = 0; k < r; ++k) accumulate(acc, irreducibles[i][k], conj[j][k], classes[k].size);
            if (!equals_integer(acc, i == j ? group_order : 0)) return false;
        }
    for (std::size_t k = 0; k < r; ++k)
        for (std::size_t l = k; l < r; ++l) {
            std::vector<i64> acc(m, 0);
            for (std::size_t i = 0; i < r; ++i) accumulate(acc, irreducibles[i][k], conj[i][l], 1);
            if (!equals_integer(acc, k == l ? group_order / classes[k].size : 0)) return false;
        }
    return true;
}

std::string CharacterTable::export_text() const {
    std::ostringstream out;
    out << "pgf-chartab v1 " << group_order << ' ' << exponent << ' ' << classes.size() << " powers ";
    if (power_maps.empty()) out << '-';
    bool first = true;
    for (const auto& [n, img] : power_maps) {
        out << (first ? "" : ",") << n;
        first = false;
    }
    out << "\nclasses";
    for (std::size_t c = 0; c < classes.size(); ++c) {
        out << ' ' << classes[c].size << ':' << classes[c].element_order << ':' << classes[c].representative << ':';
        bool f = true;
        for (const auto& [n, img] : power_maps) {
            out << (f ? "" : ",") << img[c];
            f = false;
        }
    }
    out << '\n';
    for (const auto& row : irreducibles) {
        out << "chi";
        for (std::size_t c = 0; c < row.size(); ++c) out << (c ? '|' : ' ') << row[c].to_string();
        out << '\n';
    }
    return out.str();
}

namespace {

std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> out;
    std::size_t pos = 0;
    while (true) {
        const auto i = s.find(sep, pos);
        out.push_back(s.substr(pos, i == std::string_view::npos ? std::string_view::npos : i - pos));
        if (i == std::string_view::npos) break;
        pos = i + 1;
    }
    return out;
}

std::uint32_t parse_u32(std::string_view s, const char* what) {
    std::uint32_t v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size())
        throw InvalidInput(std::string("chartab: bad ") + what + " '" + std::string(s) + "'");
    return v;
}

}  // namespace

CharacterTable CharacterTable::import_text(std::string_view text) {
    std::vector<std::string_view> lines;
    for (auto l : split(text, '\n'))
        if (!l.empty()) lines.push_back(l);
    if (lines.size() < 2) throw InvalidInput("chartab: missing header");
    const auto head = split(lines[0], ' ');
    if (head.size() != 7 || head[0] != "pgf-chartab" || head[5] != "powers")
        throw InvalidInput("chartab: bad header line");
    if (head[1] != "v1") throw InvalidInput("chartab: unsupported version " + std::string(head[1]));
    CharacterTable t;
    t.group_order = parse_u32(head[2], "order");
    t.exponent = parse_u32(head[3], "exponent");
    if (t.exponent == 0) throw InvalidInput("chartab: exponent must be positive");
    const std::size_t r = parse_u32(head[4], "class count");
    std::vector<int> primes;
    if (head[6] != "-")
        for (auto s : split(head[6], ',')) primes.push_back(static_cast<int>(parse_u32(s, "power")));
    const auto cl = split(lines[1], ' ');
    if (cl.empty() || cl[0] != "classes" || cl.size() != r + 1) throw InvalidInput("chartab: bad classes line");
    for (int n : primes) t.power_maps[n].resize(r);
    for (std::size_t c = 0; c < r; ++c) {
        const auto parts = split(cl[c + 1], ':');
        if (parts.size() != 4) throw InvalidInput("chartab: bad class entry");
        t.classes.push_back({parse_u32(parts[2], "representative"), parse_u32(parts[0], "class size"),
                             parse_u32(parts[1], "element order")});
        const auto imgs = primes.empty() ? std::vector<std::string_view>{} : split(parts[3], ',');
        if (imgs.size() != primes.size()) throw InvalidInput("chartab: bad power map images");
        for (std::size_t i = 0; i < primes.size(); ++i) {
            const auto v = parse_u32(imgs[i], "power map image");
            if (v >= r) throw InvalidInput("chartab: power map image out of range");
            t.power_maps[primes[i]][c] = v;
        }
    }
    if (lines.size() != r + 2) throw InvalidInput("chartab: expected one chi line per class");
    for (std::size_t i = 0; i < r; ++i) {
        if (lines[i + 2].substr(0, 4) != "chi ") throw InvalidInput("chartab: bad character line");
        const auto vals = split(lines[i + 2].substr(4), '|');
        if (vals.size() != r) throw InvalidInput("chartab: wrong number of values");
        std::vector<CyclotomicValue> row;
        for (auto v : vals) row.push_back(CyclotomicValue::parse(t.exponent, v));
        t.irreducibles.push_back(std::move(row));
    }
    return t;
}

namespace {

class TableMatcher {
public:
    TableMatcher(const CharacterTable& A, const CharacterTable& B, bool with_powers)
        : A_(A), B_(B), powers_(with_powers), r_(A.classes.size()) {}

    std::optional<ClassMatching> run(std::size_t budget) {
        if (B_.classes.size() != r_ || A_.irreducibles.size() != r_ || B_.irreducibles.size() != r_) return {};
        if (A_.group_order != B_.group_order) return {};
        for (const auto* T : {&A_, &B_})
            for (const auto& row : T->irreducibles)
                if (row.size() != r_) return {};
        const std::uint32_t M = std::max(A_.exponent, B_.exponent);
        if (M % A_.exponent || M % B_.exponent) return {};
        std::map<CyclotomicValue, int> ids;
        auto intern = [&](const CharacterTable& T, std::vector<std::vector<int>>& out) {
            out.assign(r_, std::vector<int>(r_));
            for (std::size_t i = 0; i < r_; ++i)
                for (std::size_t c = 0; c < r_; ++c)
                    out[i][c] = ids.emplace(lift(T.irreducibles[i][c], M), static_cast<int>(ids.size())).first->second;
        };
        intern(A_, ta_);
        intern(B_, tb_);
        if (powers_) {
            if (A_.exponent != B_.exponent) return {};
            for (const auto& [n, img] : A_.power_maps) {
                if (!B_.power_maps.count(n)) return {};
                primes_.push_back(n);
            }
            if (B_.power_maps.size() != A_.power_maps.size()) return {};
        }
        std::vector<std::vector<int>> inv_a(r_), inv_b(r_);
        for (std::size_t c = 0; c < r_; ++c) {
            inv_a[c] = column_invariant(A_, ta_, c);
            inv_b[c] = column_invariant(B_, tb_, c);
        }
        candidates_.assign(r_, {});
        for (std::size_t c = 0; c < r_; ++c) {
            for (std::size_t d = 0; d < r_; ++d)
                if (inv_a[c] == inv_b[d]) candidates_[c].push_back(static_cast<std::uint32_t>(d));
            if (candidates_[c].empty()) return {};
        }
        order_.resize(r_);
        std::iota(order_.begin(), order_.end(), 0);
        std::stable_sort(order_.begin(), order_.end(), [&](std::size_t x, std::size_t y) {
            if (powers_ && A_.classes[x].element_order != A_.classes[y].element_order)
                return A_.classes[x].element_order < A_.classes[y].element_order;
            return candidates_[x].size() < candidates_[y].size();
        });
        tau_.assign(r_, kUnset);
        used_.assign(r_, false);
        budget_ = budget;
        std::vector<int> ca(r_, 0), cb(r_, 0);
        if (!search(0, ca, cb)) return {};
        ClassMatching m;
        m.tau = tau_;
        m.sigma.assign(r_, 0);
        std::map<int, std::uint32_t> row_b;
        for (std::size_t j = 0; j < r_; ++j) row_b[final_b_[j]] = static_cast<std::uint32_t>(j);
        for (std::size_t i = 0; i < r_; ++i) m.sigma[i] = row_b.at(final_a_[i]);
        return m;
    }

private:
    static constexpr std::uint32_t kUnset = ~0u;

    std::vector<int> column_invariant(const CharacterTable& T, const std::vector<std::vector<int>>& tab, std::size_t c) {
        std::vector<int> v;
        v.push_back(static_cast<int>(T.classes[c].size));
        if (powers_) {
            v.push_back(static_cast<int>(T.classes[c].element_order));
            for (int n : primes_) {
                const auto img = T.power_maps.at(n)[c];
                v.push_back(static_cast<int>(T.classes[img].size));
                v.push_back(static_cast<int>(T.classes[img].element_order));
            }
        }
        std::vector<int> col;
        for (std::size_t i = 0; i < r_; ++i) col.push_back(tab[i][c]);
        std::sort(col.begin(), col.end());
        v.insert(v.end(), col.begin(), col.end());
        return v;
    }

    bool powers_consistent(std::size_t c) const {
        for (int n : primes_) {
            const auto& pa = A_.power_maps.at(n);
            const auto& pb = B_.power_maps.at(n);
            for (std::size_t x = 0; x < r_; ++x) {
                if (tau_[x] == kUnset) continue;
                const auto img = pa[x];
                if (x != c && img != c) continue;
                if (tau_[img] != kUnset && tau_[img] != pb[tau_[x]]) return false;
            }
        }
        return true;
    }

    bool search(std::size_t depth, const std::vector<int>& ca, const std::vector<int>& cb) {
        if (depth == r_) {
            // all rows are distinct irreducibles, so cells must be singletons
            std::vector<int> s(ca);
            std::sort(s.begin(), s.end());
            if (std::adjacent_find(s.begin(), s.end()) != s.end()) return false;
            final_a_ = ca;
            final_b_ = cb;
            return true;
        }
        const std::size_t c = order_[depth];
        for (auto d : candidates_[c]) {
            if (used_[d]) continue;
            if (budget_ == 0) throw BoundExceeded("character table matching: search budget exhausted");
            --budget_;
            tau_[c] = d;
            if (!powers_consistent(c)) {
                tau_[c] = kUnset;
                continue;
            }
            std::map<std::pair<int, int>, int> count;
            for (std::size_t i = 0; i < r_; ++i) ++count[{ca[i], ta_[i][c]}];
            for (std::size_t j = 0; j < r_; ++j) --count[{cb[j], tb_[j][d]}];
            bool ok = std::all_of(count.begin(), count.end(), [](const auto& kv) { return kv.second == 0; });
            if (ok) {
                std::map<std::pair<int, int>, int> relabel;
                for (auto& kv : count) relabel[kv.first] = static_cast<int>(relabel.size());
                std::vector<int> na(r_), nb(r_);
                for (std::size_t i = 0; i < r_; ++i) na[i] = relabel[{ca[i], ta_[i][c]}];
                for (std::size_t j = 0; j < r_; ++j) nb[j] = relabel[{cb[j], tb_[j][d]}];
                used_[d] = true;
                if (search(depth + 1, na, nb)) return true;
                used_[d] = false;
            }
            tau_[c] = kUnset;
        }
        return false;
    }

    const CharacterTable& A_;
    const CharacterTable& B_;
    bool powers_;
    std::size_t r_;
    std::vector<std::vector<int>> ta_, tb_;
    std::vector<int> primes_;
    std::vector<std::vector<std::uint32_t>> candidates_;
    std::vector<std::size_t> order_;
    std::vector<std::uint32_t> tau_;
    std::vector<bool> used_;
    std::vector<int> final_a_, final_b_;
    std::size_t budget_ = 0;
};

constexpr std::size_t kMatchBudget = 20'000'000;

}  // namespace

std::optional<ClassMatching> char_tables_equivalent(const CharacterTable& A, const CharacterTable& B) {
    return TableMatcher(A, B, false).run(kMatchBudget);
}

std::optional<ClassMatching> brauer_pair(const CharacterTable& A, const CharacterTable& B) {
    return TableMatcher(A, B, true).run(kMatchBudget);
}

bool verify_matching(const CharacterTable& A, const CharacterTable& B, const ClassMatching& m, bool with_power_maps) {
    const std::size_t r = A.classes.size();
    if (B.classes.size() != r || m.tau.size() != r || m.sigma.size() != r) return false;
    auto is_perm = [r](const std::vector<std::uint32_t>& v) {
        std::vector<bool> seen(r, false);
        for (auto x : v) {
            if (x >= r || seen[x]) return false;
            seen[x] = true;
        }
        return true;
    };
    if (!is_perm(m.tau) || !is_perm(m.sigma)) return false;
    const std::uint32_t M = std::max(A.exponent, B.exponent);
    if (M % A.exponent || M % B.exponent) return false;
    for (std::size_t c = 0; c < r; ++c)
        if (A.classes[c].size != B.classes[m.tau[c]].size) return false;
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t c = 0; c < r; ++c)
            if (!(lift(A.irreducibles[i][c], M) == lift(B.irreducibles[m.sigma[i]][m.tau[c]], M))) return false;
    if (with_power_maps) {
        if (A.power_maps.size() != B.power_maps.size()) return false;
        for (const auto& [n, pa] : A.power_maps) {
            const auto it = B.power_maps.find(n);
            if (it == B.power_maps.end()) return false;
            for (std::size_t c = 0; c < r; ++c)
                if (m.tau[pa[c]] != it->second[m.tau[c]]) return false;
        }
    }
    return true;
}

bool are_twins(const GroupPtr& G, const GroupPtr& H, const IdContext& ids) {
    if (!are_siblings(G, H, ids)) return false;
    return brauer_pair(character_table(G), character_table(H)).has_value();
}

}  // namespace pgf
