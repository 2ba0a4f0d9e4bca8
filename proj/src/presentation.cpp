#include "pgf/presentation.hpp"

#include <charconv>
#include <cstdlib>
#include <functional>
#include <sstream>

#include "pgf/errors.hpp"

namespace pgf {

bool is_prime(int p) {
    if (p < 2) return false;
    for (int d = 2; d * d <= p; ++d)
        if (p % d == 0) return false;
    return true;
}

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r' || s.back() == '\n'))
        s.remove_suffix(1);
    return s;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= s.size(); ++i) {
        if (i == s.size() || s[i] == sep) {
            out.push_back(s.substr(start, i - start));
            start = i + 1;
        }
    }
    return out;
}

int parse_int(std::string_view s, std::string_view what) {
    s = trim(s);
    int value = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (ec != std::errc{} || ptr != s.data() + s.size())
        throw InvalidInput("presentation: expected integer for " + std::string(what) + ", got '" +
                           std::string(s) + "'");
    return value;
}

std::vector<int> parse_ints(std::string_view s, char sep, std::string_view what) {
    std::vector<int> out;
    s = trim(s);
    if (s.empty()) return out;
    for (auto tok : split(s, sep)) {
        tok = trim(tok);
        if (tok.empty()) continue;
        out.push_back(parse_int(tok, what));
    }
    return out;
}

std::string format_vector(const Exponents& e) {
    std::string out;
    for (std::size_t i = 0; i < e.size(); ++i) {
        if (i) out += ',';
        out += std::to_string(e[i]);
    }
    return out;
}

}  // namespace

PcPresentation::PcPresentation(int prime, int ngens) : p_(prime), n_(ngens) {
    if (!is_prime(prime)) throw InvalidInput("presentation: " + std::to_string(prime) + " is not prime");
    if (ngens < 0 || ngens > kMaxGens)
        throw InvalidInput("presentation: generator count must lie in [0, " + std::to_string(kMaxGens) + "]");
    powers_.assign(static_cast<std::size_t>(kMaxGens), Word{});
    comms_.assign(static_cast<std::size_t>(kMaxGens * kMaxGens), Word{});
}

std::uint32_t PcPresentation::order() const {
    std::uint64_t o = 1;
    for (int i = 0; i < n_; ++i) {
        o *= static_cast<std::uint64_t>(p_);
        if (o > 0xffffffffULL) throw BoundExceeded("group order does not fit in 32 bits");
    }
    return static_cast<std::uint32_t>(o);
}

void PcPresentation::check_index(int i) const {
    if (i < 0 || i >= n_) throw InvalidInput("presentation: generator index out of range");
}

void PcPresentation::check_word(const Exponents& w, int after) const {
    if (static_cast<int>(w.size()) != n_)
        throw InvalidInput("presentation: relation vector has length " + std::to_string(w.size()) +
                           ", expected " + std::to_string(n_));
    for (int t = 0; t < n_; ++t) {
        if (w[static_cast<std::size_t>(t)] < 0 || w[static_cast<std::size_t>(t)] >= p_)
            throw InvalidInput("presentation: exponent out of range [0, p)");
        if (t <= after && w[static_cast<std::size_t>(t)] != 0)
            throw InvalidInput("presentation: relation for generator " + std::to_string(after + 1) +
                               " involves generator " + std::to_string(t + 1) +
                               " (only later generators allowed)");
    }
}

PcPresentation& PcPresentation::set_power(int i, const Exponents& w) {
    check_index(i);
    check_word(w, i);
    powers_[static_cast<std::size_t>(i)] = to_word(w);
    return *this;
}

PcPresentation& PcPresentation::set_commutator(int j, int i, const Exponents& w) {
    check_index(i);
    check_index(j);
    if (j <= i) throw InvalidInput("presentation: commutator [g_j, g_i] requires j > i");
    check_word(w, j);
    comm_ref(j, i) = to_word(w);
    return *this;
}

Exponents PcPresentation::power(int i) const {
    check_index(i);
    return from_word(powers_[static_cast<std::size_t>(i)]);
}

Exponents PcPresentation::commutator(int j, int i) const {
    check_index(i);
    check_index(j);
    if (j <= i) throw InvalidInput("presentation: commutator [g_j, g_i] requires j > i");
    return from_word(comm_ref(j, i));
}

bool PcPresentation::is_trivial_power(int i) const {
    const auto& w = powers_[static_cast<std::size_t>(i)];
    for (int t = 0; t < n_; ++t)
        if (w[static_cast<std::size_t>(t)]) return false;
    return true;
}

bool PcPresentation::is_trivial_commutator(int j, int i) const {
    const auto& w = comm_ref(j, i);
    for (int t = 0; t < n_; ++t)
        if (w[static_cast<std::size_t>(t)]) return false;
    return true;
}

Exponents PcPresentation::generator(int i) const {
    check_index(i);
    Exponents e = identity();
    e[static_cast<std::size_t>(i)] = 1;
    return e;
}

PcPresentation::Word PcPresentation::to_word(const Exponents& e) const {
    Word w{};
    for (int t = 0; t < n_ && t < static_cast<int>(e.size()); ++t)
        w[static_cast<std::size_t>(t)] = static_cast<std::uint8_t>(e[static_cast<std::size_t>(t)]);
    return w;
}

Exponents PcPresentation::from_word(const Word& w) const {
    Exponents e(static_cast<std::size_t>(n_));
    for (int t = 0; t < n_; ++t) e[static_cast<std::size_t>(t)] = w[static_cast<std::size_t>(t)];
    return e;
}

// Collection from the left. Writing x = a * b with a = g_1^{e_1}..g_k^{e_k} and b in
// <g_{k+1}, ..>, we have x g_k = (a g_k) * b^{g_k}. The overflow of a g_k contributes the
// power relation of g_k, and b^{g_k} is the product of conjugates g_j^{g_k} = g_j [g_j, g_k].
// Both live in <g_{k+1}, ..>, so the recursion only touches strictly later generators.
void PcPresentation::multiply_generator_word(Word& x, int k) const {
    Word b{};
    bool b_trivial = true;
    for (int j = k + 1; j < n_; ++j) {
        const auto uj = static_cast<std::size_t>(j);
        b[uj] = x[uj];
        if (x[uj]) b_trivial = false;
        x[uj] = 0;
    }
    const auto uk = static_cast<std::size_t>(k);
    Word tail{};
    if (++x[uk] == p_) {
        x[uk] = 0;
        tail = powers_[uk];
    }
    if (!b_trivial) {
        for (int j = k + 1; j < n_; ++j) {
            const auto uj = static_cast<std::size_t>(j);
            if (!b[uj]) continue;
            if (is_trivial_commutator(j, k)) {
                for (int e = 0; e < b[uj]; ++e) multiply_generator_word(tail, j);
            } else {
                Word conj = comm_ref(j, k);
                conj[uj] = 1;
                for (int e = 0; e < b[uj]; ++e) multiply_word(tail, conj);
            }
        }
    }
    for (int j = k + 1; j < n_; ++j) x[static_cast<std::size_t>(j)] = tail[static_cast<std::size_t>(j)];
}

void PcPresentation::multiply_word(Word& x, const Word& y) const {
    for (int j = 0; j < n_; ++j)
        for (int e = 0; e < y[static_cast<std::size_t>(j)]; ++e) multiply_generator_word(x, j);
}

Exponents PcPresentation::multiply_generator(const Exponents& x, int k) const {
    check_index(k);
    Word w = to_word(x);
    multiply_generator_word(w, k);
    return from_word(w);
}

Exponents PcPresentation::multiply(const Exponents& x, const Exponents& y) const {
    Word w = to_word(x);
    multiply_word(w, to_word(y));
    return from_word(w);
}

Exponents PcPresentation::power_of(const Exponents& x, long long e) const {
    if (e < 0) return power_of(inverse(x), -e);
    Word result{};
    Word base = to_word(x);
    while (e > 0) {
        if (e & 1) multiply_word(result, base);
        e >>= 1;
        if (e) {
            Word sq = base;
            multiply_word(sq, base);
            base = sq;
        }
    }
    return from_word(result);
}

Exponents PcPresentation::inverse(const Exponents& x) const {
    // x^(m-1) where m is the order of x.
    const Word id{};
    const Word start = to_word(x);
    if (start == id) return identity();
    Word prev = start;
    Word cur = start;
    multiply_word(cur, start);
    while (cur != id) {
        prev = cur;
        multiply_word(cur, start);
    }
    return from_word(prev);
}

Exponents PcPresentation::collect(std::span<const int> letters) const {
    Word w{};
    for (int letter : letters) {
        if (letter == 0 || std::abs(letter) > n_) throw InvalidInput("collect: letter out of range");
        const int g = std::abs(letter) - 1;
        if (letter > 0) {
            multiply_generator_word(w, g);
        } else {
            multiply_word(w, to_word(inverse(generator(g))));
        }
    }
    return from_word(w);
}

bool PcPresentation::visit_overlaps(const std::function<bool(const Word&, const Word&)>& visit) const {
    auto gen = [&](int i) {
        Word w{};
        w[static_cast<std::size_t>(i)] = 1;
        return w;
    };
    // g_k (g_j g_i) = (g_k g_j) g_i
    for (int k = n_ - 1; k >= 0; --k)
        for (int j = k - 1; j >= 0; --j)
            for (int i = j - 1; i >= 0; --i) {
                Word ji = gen(j);
                multiply_generator_word(ji, i);
                Word left = gen(k);
                multiply_word(left, ji);
                Word right = gen(k);
                multiply_generator_word(right, j);
                multiply_generator_word(right, i);
                if (!visit(left, right)) return false;
            }
    for (int j = 0; j < n_; ++j) {
        const Word& pw_j = powers_[static_cast<std::size_t>(j)];
        for (int i = 0; i < j; ++i) {
            const Word& pw_i = powers_[static_cast<std::size_t>(i)];
            // g_j^{p-1} (g_j g_i) = (g_j^p) g_i
            Word left{};
            for (int e = 0; e < p_ - 1; ++e) multiply_generator_word(left, j);
            Word ji = gen(j);
            multiply_generator_word(ji, i);
            multiply_word(left, ji);
            Word right = pw_j;
            multiply_generator_word(right, i);
            if (!visit(left, right)) return false;
            // g_j (g_i^p) = (g_j g_i^{p-1}) g_i
            Word l2 = gen(j);
            multiply_word(l2, pw_i);
            Word r2 = gen(j);
            for (int e = 0; e < p_; ++e) multiply_generator_word(r2, i);
            if (!visit(l2, r2)) return false;
        }
        // g_j (g_j^p) = (g_j^p) g_j
        Word l3 = gen(j);
        multiply_word(l3, pw_j);
        Word r3 = pw_j;
        multiply_generator_word(r3, j);
        if (!visit(l3, r3)) return false;
    }
    return true;
}

bool PcPresentation::is_consistent() const {
    return visit_overlaps([](const Word& a, const Word& b) { return a == b; });
}

std::vector<std::pair<Exponents, Exponents>> PcPresentation::overlap_results() const {
    std::vector<std::pair<Exponents, Exponents>> out;
    visit_overlaps([&](const Word& a, const Word& b) {
        out.emplace_back(from_word(a), from_word(b));
        return true;
    });
    return out;
}

std::string PcPresentation::to_string() const {
    std::ostringstream out;
    out << p_ << ' ' << n_ << " |";
    bool first = true;
    for (int i = 0; i < n_; ++i) {
        if (is_trivial_power(i)) continue;
        out << (first ? " " : " ; ") << "pow " << (i + 1) << ": " << format_vector(power(i));
        first = false;
    }
    out << " |";
    first = true;
    for (int j = 0; j < n_; ++j)
        for (int i = 0; i < j; ++i) {
            if (is_trivial_commutator(j, i)) continue;
            out << (first ? " " : " ; ") << "comm " << (j + 1) << ' ' << (i + 1) << ": "
                << format_vector(commutator(j, i));
            first = false;
        }
    return out.str();
}

PcPresentation PcPresentation::parse(std::string_view text) {
    auto sections = split(trim(text), '|');
    if (sections.size() != 3)
        throw InvalidInput("presentation: expected 'p n | pow ... | comm ...' with exactly three sections");
    auto head = parse_ints(sections[0], ' ', "header");
    if (head.size() != 2) throw InvalidInput("presentation: header must be 'p n'");
    PcPresentation pres(head[0], head[1]);

    auto parse_entries = [&](std::string_view body, std::string_view keyword, auto&& apply) {
        body = trim(body);
        if (body.empty()) return;
        for (auto entry : split(body, ';')) {
            entry = trim(entry);
            if (entry.substr(0, keyword.size()) != keyword)
                throw InvalidInput("presentation: expected '" + std::string(keyword) + "' entry, got '" +
                                   std::string(entry) + "'");
            entry.remove_prefix(keyword.size());
            auto colon = entry.find(':');
            if (colon == std::string_view::npos) throw InvalidInput("presentation: missing ':' in entry");
            auto idx = parse_ints(entry.substr(0, colon), ' ', "generator index");
            auto vec = parse_ints(entry.substr(colon + 1), ',', "exponent");
            apply(idx, vec);
        }
    };
    parse_entries(sections[1], "pow", [&](const std::vector<int>& idx, const Exponents& v) {
        if (idx.size() != 1) throw InvalidInput("presentation: 'pow' takes one generator index");
        pres.set_power(idx[0] - 1, v);
    });
    parse_entries(sections[2], "comm", [&](const std::vector<int>& idx, const Exponents& v) {
        if (idx.size() != 2) throw InvalidInput("presentation: 'comm' takes two generator indices");
        pres.set_commutator(idx[0] - 1, idx[1] - 1, v);
    });
    return pres;
}

std::vector<int> PcPresentation::serialize() const {
    std::vector<int> out{p_, n_};
    for (int i = 0; i < n_; ++i)
        for (int t = i + 1; t < n_; ++t) out.push_back(powers_[static_cast<std::size_t>(i)][static_cast<std::size_t>(t)]);
    for (int i = 0; i < n_; ++i)
        for (int j = i + 1; j < n_; ++j)
            for (int t = j + 1; t < n_; ++t) out.push_back(comm_ref(j, i)[static_cast<std::size_t>(t)]);
    return out;
}

}  // namespace pgf
