#include "pgf/fingerprint.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <optional>
#include <sstream>
#include <thread>
#include <unordered_map>

#include "pgf/errors.hpp"
#include "pgf/structure.hpp"

namespace pgf {

namespace {

bool is_prime_order(std::uint32_t n) { return n > 1 && is_prime(static_cast<int>(n)); }

}  // namespace

std::string Identifier::to_string() const {
    if (by_catalog()) return "(" + std::to_string(order) + "," + std::to_string(index) + ")";
    return "[" + code.to_string() + "]";
}

void Identifier::append_to(std::vector<std::uint32_t>& out) const {
    out.push_back(order);
    out.push_back(index);
    out.push_back(static_cast<std::uint32_t>(code.bytes.size()));
    out.insert(out.end(), code.bytes.begin(), code.bytes.end());
}

Identifier IdContext::identify(const GroupPtr& G) const {
    Identifier id;
    id.order = G->order();
    if (id.order == 1 || is_prime_order(id.order)) {
        id.index = 1;
        return id;
    }
    auto code = canonical_code(G);
    if (catalogs_ && catalogs_->has_order(id.order)) {
        const auto index = catalogs_->index_of(code);
        if (!index)
            throw IntegrityError("group of order " + std::to_string(id.order) + " is missing from the loaded catalog");
        id.index = *index;
        return id;
    }
    id.code = std::move(code);
    return id;
}

Identifier IdContext::identify(const Subgroup& U) const {
    if (U.order() == 1 || is_prime_order(U.order())) return Identifier{U.order(), 1, {}};
    return identify(subgroup_as_group(U));
}

Identifier IdContext::identify_quotient(const GroupPtr& G, const Subgroup& N) const {
    const std::uint32_t order = G->order() / N.order();
    if (order == 1 || is_prime_order(order)) return Identifier{order, 1, {}};
    return identify(make_group(quotient(G, N)));
}

std::vector<std::uint32_t> SiblingFingerprint::serialize() const {
    std::vector<std::uint32_t> out;
    out.push_back(static_cast<std::uint32_t>(sf.entries.size()));
    for (const auto& [len, id] : sf.entries) {
        out.push_back(len);
        id.append_to(out);
    }
    out.push_back(static_cast<std::uint32_t>(ff.entries.size()));
    for (const auto& id : ff.entries) id.append_to(out);
    frattini_id.append_to(out);
    out.push_back(static_cast<std::uint32_t>(upper_series_ids.size()));
    for (const auto& id : upper_series_ids) id.append_to(out);
    out.push_back(static_cast<std::uint32_t>(lower_series_ids.size()));
    for (const auto& id : lower_series_ids) id.append_to(out);
    return out;
}

std::uint64_t SiblingFingerprint::hash() const {
    std::uint64_t h = 1469598103934665603ULL;
    for (auto v : serialize()) {
        h ^= v;
        h *= 1099511628211ULL;
    }
    return h;
}

SubgroupFingerprint subgroup_fingerprint(const GroupPtr& G, const IdContext& ids) {
    SubgroupFingerprint fp;
    for (const auto& c : subgroup_conjugacy_classes(G)) fp.entries.emplace_back(c.length, ids.identify(c.representative));
    std::sort(fp.entries.begin(), fp.entries.end());
    return fp;
}

FactorFingerprint factor_fingerprint(const GroupPtr& G, const IdContext& ids) {
    FactorFingerprint fp;
    for (const auto& N : normal_subgroups(G)) fp.entries.push_back(ids.identify_quotient(G, N));
    std::sort(fp.entries.begin(), fp.entries.end());
    return fp;
}

SiblingFingerprint sibling_fingerprint(const GroupPtr& G, const IdContext& ids) {
    SiblingFingerprint ss;
    ss.sf = subgroup_fingerprint(G, ids);
    ss.ff = factor_fingerprint(G, ids);
    ss.frattini_id = ids.identify(frattini_subgroup(G));
    for (const auto& t : series(G, SeriesKind::upper_central).terms)
        if (t.order() < G->order()) ss.upper_series_ids.push_back(ids.identify(t));
    for (const auto& t : series(G, SeriesKind::lower_central).terms)
        if (t.order() < G->order()) ss.lower_series_ids.push_back(ids.identify(t));
    return ss;
}

bool are_siblings(const GroupPtr& G, const GroupPtr& H, const IdContext& ids) {
    if (G->order() != H->order()) return false;
    if (!(sibling_fingerprint(G, ids) == sibling_fingerprint(H, ids))) return false;
    return !is_isomorphic(G, H).has_value();
}

std::vector<SiblingBucket> sibling_census(const std::vector<CatalogEntry>& entries, const IdContext& ids,
                                          const CensusOptions& opts) {
    std::vector<std::optional<SiblingFingerprint>> fps(entries.size());
    std::atomic<std::size_t> next{0};
    std::size_t done = 0;
    std::mutex mu;
    std::exception_ptr error;
    auto work = [&] {
        for (std::size_t i; (i = next++) < entries.size();) {
            try {
                fps[i] = sibling_fingerprint(make_group(entries[i].presentation), ids);
            } catch (...) {
                std::lock_guard lock(mu);
                if (!error) error = std::current_exception();
                next = entries.size();
                return;
            }
            std::lock_guard lock(mu);
            ++done;
            if (opts.progress) opts.progress(done, entries.size());
        }
    };
    const unsigned nthreads = std::max(1u, std::min<unsigned>(opts.threads, static_cast<unsigned>(entries.size())));
    if (nthreads == 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < nthreads; ++t) pool.emplace_back(work);
        for (auto& t : pool) t.join();
    }
    if (error) std::rethrow_exception(error);

    std::unordered_map<std::uint64_t, std::vector<std::pair<SiblingFingerprint, SiblingBucket>>> table;
    for (std::size_t i = 0; i < entries.size(); ++i) {
        const auto& e = entries[i];
        auto& ss = *fps[i];
        auto& slot = table[ss.hash()];
        auto it = std::find_if(slot.begin(), slot.end(), [&](const auto& b) { return b.first == ss; });
        if (it == slot.end()) {
            slot.emplace_back(std::move(ss), SiblingBucket{e.order, {}});
            it = std::prev(slot.end());
        }
        it->second.indices.push_back(e.index);
    }
    std::vector<SiblingBucket> out;
    for (auto& [h, slot] : table)
        for (auto& [ss, bucket] : slot)
            if (bucket.indices.size() >= 2) {
                std::sort(bucket.indices.begin(), bucket.indices.end());
                out.push_back(std::move(bucket));
            }
    std::sort(out.begin(), out.end(), [](const SiblingBucket& a, const SiblingBucket& b) {
        return std::tie(a.order, a.indices) < std::tie(b.order, b.indices);
    });
    return out;
}

std::string format_census(const std::vector<SiblingBucket>& buckets) {
    std::ostringstream out;
    std::size_t pairs = 0, triples = 0, quadruples = 0;
    for (const auto& b : buckets) {
        out << b.order << ' ' << b.indices.size();
        for (auto i : b.indices) out << ' ' << i;
        out << '\n';
        pairs += b.indices.size() == 2;
        triples += b.indices.size() == 3;
        quadruples += b.indices.size() == 4;
    }
    out << "pairs=" << pairs << " triples=" << triples << " quadruples=" << quadruples << '\n';
    return out.str();
}

}  // namespace pgf
