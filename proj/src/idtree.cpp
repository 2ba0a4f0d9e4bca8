#include "pgf/idtree.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "pgf/canon.hpp"
#include "pgf/chartab.hpp"
#include "pgf/errors.hpp"
#include "pgf/fingerprint.hpp"
#include "pgf/structure.hpp"

namespace pgf {

namespace {

std::uint64_t fnv1a(std::string_view s) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

std::string hex64(std::uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

void append_id(std::vector<long long>& out, const Identifier& id) {
    std::vector<std::uint32_t> raw;
    id.append_to(raw);
    out.insert(out.end(), raw.begin(), raw.end());
}

void append_ids(std::vector<long long>& out, std::vector<Identifier> ids) {
    std::sort(ids.begin(), ids.end());
    out.push_back(static_cast<long long>(ids.size()));
    for (const auto& id : ids) append_id(out, id);
}

}  // namespace

std::string StepLabel::to_string() const {
    return power ? std::to_string(step) + ":" + std::to_string(power) : std::to_string(step);
}

StepLabel StepLabel::parse(std::string_view text) {
    StepLabel s;
    const auto colon = text.find(':');
    auto num = [&](std::string_view t, auto& v) {
        const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
        if (t.empty() || ec != std::errc{} || ptr != t.data() + t.size())
            throw InvalidInput("bad step label '" + std::string(text) + "'");
    };
    num(text.substr(0, colon), s.step);
    if (colon != std::string_view::npos) num(text.substr(colon + 1), s.power);
    if (s.step < 1 || s.step > 9 || (s.step == 7) != (s.power != 0))
        throw InvalidInput("bad step label '" + std::string(text) + "'");
    return s;
}

std::string InvariantValue::key() const {
    if (payload.empty()) return "-";
    std::string s;
    for (std::size_t i = 0; i < payload.size(); ++i) {
        if (i) s += ',';
        s += std::to_string(payload[i]);
    }
    return s;
}

std::vector<long long> ClusterPartition::payload() const {
    std::vector<long long> out;
    for (std::size_t i = 0; i < clusters.size(); ++i) {
        out.push_back(clusters[i].size);
        out.push_back(clusters[i].class_length);
        out.push_back(clusters[i].element_order);
        out.push_back(i < cluster_map.size() ? cluster_map[i] : -1);
    }
    return out;
}

ClusterPartition cluster_partition(const GroupPtr& G) {
    const auto& cls = G->classes();
    std::map<std::pair<std::uint32_t, std::uint32_t>, std::vector<std::uint32_t>> by_lo;
    for (std::uint32_t c = 0; c < cls.size(); ++c) by_lo[{cls[c].size, cls[c].element_order}].push_back(c);
    ClusterPartition part;
    for (auto& [lo, members] : by_lo) {
        ClusterPartition::Cluster cl;
        cl.class_length = lo.first;
        cl.element_order = lo.second;
        cl.size = lo.first * static_cast<std::uint32_t>(members.size());
        cl.classes = std::move(members);
        part.clusters.push_back(std::move(cl));
    }
    return part;
}

ClusterPartition refine_by_power(const GroupPtr& G, const ClusterPartition& part, std::uint32_t r) {
    if (r == 0) throw InvalidInput("refine_by_power: r must be positive");
    const auto& cls = G->classes();
    const auto pi = power_map(G, r);
    std::vector<int> label(cls.size(), -1);
    for (std::size_t i = 0; i < part.clusters.size(); ++i)
        for (auto c : part.clusters[i].classes) label[c] = static_cast<int>(i);
    std::size_t count = part.clusters.size();
    while (true) {
        // A: cluster of the image; B: clusters whose powers land in the class
        std::vector<std::set<int>> pre(cls.size());
        for (std::size_t c = 0; c < cls.size(); ++c) pre[pi[c]].insert(label[c]);
        using Desc = std::tuple<int, int, std::vector<int>>;
        std::vector<Desc> desc(cls.size());
        for (std::size_t c = 0; c < cls.size(); ++c)
            desc[c] = {label[c], label[pi[c]], std::vector<int>(pre[c].begin(), pre[c].end())};
        std::vector<Desc> sorted = desc;
        std::sort(sorted.begin(), sorted.end());
        sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
        for (std::size_t c = 0; c < cls.size(); ++c)
            label[c] = static_cast<int>(std::lower_bound(sorted.begin(), sorted.end(), desc[c]) - sorted.begin());
        if (sorted.size() == count) break;
        count = sorted.size();
    }
    ClusterPartition out;
    out.power = r;
    out.clusters.resize(count);
    for (std::uint32_t c = 0; c < cls.size(); ++c) {
        auto& cl = out.clusters[static_cast<std::size_t>(label[c])];
        cl.classes.push_back(c);
        cl.size += cls[c].size;
        cl.class_length = cls[c].size;
        cl.element_order = cls[c].element_order;
    }
    for (const auto& cl : out.clusters) {
        std::set<std::uint32_t> img;
        for (auto c : cl.classes) img.insert(pi[c]);
        const auto& target = out.clusters[static_cast<std::size_t>(label[*img.begin()])].classes;
        out.cluster_map.push_back(std::equal(img.begin(), img.end(), target.begin(), target.end())
                                      ? label[*img.begin()]
                                      : -1);
    }
    return out;
}

std::vector<std::uint32_t> cube_map_cycle_type(const GroupPtr& G) {
    if (G->prime() != 2) throw InvalidInput("cube map cycle type needs a 2-group");
    const auto pi = power_map(G, 3);
    std::vector<bool> seen(pi.size(), false);
    std::vector<std::uint32_t> out;
    for (std::size_t c = 0; c < pi.size(); ++c) {
        if (seen[c]) continue;
        std::uint32_t len = 0;
        for (std::size_t x = c; !seen[x]; x = pi[x]) {
            seen[x] = true;
            ++len;
        }
        out.push_back(len);
    }
    std::sort(out.rbegin(), out.rend());
    return out;
}

InvariantValue invariant_step(const GroupPtr& G, const StepLabel& step, const std::vector<std::uint32_t>& schedule) {
    InvariantValue v{step, {}};
    auto& out = v.payload;
    const IdContext ids;
    switch (step.step) {
    case 1:
        out.push_back(rank(G));
        break;
    case 2:
        for (const auto& inv : derived_series_abelian_invariants(G)) {
            out.push_back(static_cast<long long>(inv.size()));
            out.insert(out.end(), inv.begin(), inv.end());
        }
        break;
    case 3: {
        const auto orders = element_order_multiset(G);
        for (std::size_t i = 0; i < orders.size();) {
            std::size_t j = i;
            while (j < orders.size() && orders[j] == orders[i]) ++j;
            out.push_back(orders[i]);
            out.push_back(static_cast<long long>(j - i));
            i = j;
        }
        break;
    }
    case 4: {
        std::vector<std::pair<std::uint32_t, std::uint32_t>> lo;
        for (const auto& c : G->classes()) lo.emplace_back(c.size, c.element_order);
        std::sort(lo.begin(), lo.end());
        for (auto [l, o] : lo) {
            out.push_back(l);
            out.push_back(o);
        }
        break;
    }
    case 5: {
        const auto terms = series(G, SeriesKind::lower_exponent_p).terms;
        Subgroup last = Subgroup::trivial(G);
        for (const auto& t : terms)
            if (t.order() > 1) last = t;
        append_id(out, ids.identify_quotient(G, last));
        break;
    }
    case 6: {
        const auto ct = cube_map_cycle_type(G);
        out.assign(ct.begin(), ct.end());
        break;
    }
    case 7: {
        if (std::find(schedule.begin(), schedule.end(), step.power) == schedule.end())
            throw InvalidInput("step " + step.to_string() + " is not in the power schedule");
        auto part = cluster_partition(G);
        for (auto r : schedule) {
            part = refine_by_power(G, part, r);
            if (r == step.power) break;
        }
        out = part.payload();
        break;
    }
    case 8: {
        std::vector<Identifier> q;
        for (const auto& N : central_cyclic_subgroups(G)) q.push_back(ids.identify_quotient(G, N));
        append_ids(out, std::move(q));
        break;
    }
    case 9: {
        std::vector<Identifier> m;
        for (const auto& M : maximal_subgroups(G)) m.push_back(ids.identify(M));
        append_ids(out, std::move(m));
        break;
    }
    default:
        throw InvalidInput("unknown invariant step " + step.to_string());
    }
    return v;
}

std::vector<std::uint32_t> default_power_schedule(int p, int n) {
    std::vector<std::uint32_t> out;
    std::uint32_t r = static_cast<std::uint32_t>(p);
    for (int k = 1; k < n; ++k, r *= static_cast<std::uint32_t>(p)) out.push_back(r);
    for (std::uint32_t q : {2u, 3u, 5u})
        if (q != static_cast<std::uint32_t>(p)) out.push_back(q);
    return out;
}

namespace {

std::vector<StepLabel> pipeline_for(int p, const std::vector<std::uint32_t>& schedule) {
    std::vector<StepLabel> out{{1, 0}, {2, 0}, {3, 0}, {4, 0}, {5, 0}};
    if (p == 2) out.push_back({6, 0});
    for (auto r : schedule) out.push_back({7, r});
    out.push_back({8, 0});
    out.push_back({9, 0});
    return out;
}

}  // namespace

std::vector<StepLabel> pipeline(int p, int n) { return pipeline_for(p, default_power_schedule(p, n)); }

std::uint32_t DecisionTree::order() const {
    std::uint32_t o = 1;
    for (int i = 0; i < n; ++i) o *= static_cast<std::uint32_t>(p);
    return o;
}

std::size_t DecisionTree::leaf_count() const {
    return static_cast<std::size_t>(
        std::count_if(nodes.begin(), nodes.end(), [](const TreeNode& t) { return !t.step.has_value(); }));
}

std::size_t DecisionTree::max_leaf_size() const {
    std::size_t m = 0;
    for (const auto& t : nodes) m = std::max(m, t.candidates.size());
    return m;
}

std::uint64_t catalog_checksum(int p, int n, const std::vector<CatalogEntry>& entries) {
    return fnv1a(format_catalog(p, n, entries));
}

DecisionTree build_tree(int p, int n, const std::vector<CatalogEntry>& entries, const TreeBuildOptions& opts) {
    DecisionTree tree;
    tree.p = p;
    tree.n = n;
    tree.schedule = default_power_schedule(p, n);
    tree.catalog_checksum = catalog_checksum(p, n, entries);
    tree.catalog_count = static_cast<std::uint32_t>(entries.size());
    for (std::size_t i = 0; i < entries.size(); ++i)
        if (entries[i].index != i + 1) throw InvalidInput("build_tree: catalog indices must be 1..count");
    const auto steps = pipeline_for(p, tree.schedule);

    std::vector<GroupPtr> groups(entries.size());
    std::vector<std::vector<std::optional<std::string>>> cache(entries.size(),
                                                                std::vector<std::optional<std::string>>(steps.size()));
    auto key = [&](std::size_t g, std::size_t k) -> const std::string& {
        auto& slot = cache[g][k];
        if (!slot) {
            if (!groups[g]) groups[g] = make_group(entries[g].presentation);
            slot = invariant_step(groups[g], steps[k], tree.schedule).key();
        }
        return *slot;
    };
    std::size_t placed = 0;
    std::function<std::uint32_t(const std::vector<std::size_t>&, std::size_t)> build =
        [&](const std::vector<std::size_t>& set, std::size_t level) -> std::uint32_t {
        const auto id = static_cast<std::uint32_t>(tree.nodes.size());
        tree.nodes.emplace_back();
        if (set.size() > 1) {
            for (std::size_t k = level; k < steps.size(); ++k) {
                std::map<std::string, std::vector<std::size_t>> parts;
                for (auto g : set) parts[key(g, k)].push_back(g);
                if (parts.size() < 2) continue;
                tree.nodes[id].step = steps[k];
                std::vector<std::pair<std::string, std::uint32_t>> children;
                for (const auto& [payload, members] : parts) children.emplace_back(payload, build(members, k + 1));
                tree.nodes[id].children = std::move(children);
                return id;
            }
        }
        for (auto g : set) tree.nodes[id].candidates.push_back(entries[g].index);
        if (set.size() > 1)
            for (auto g : set) tree.resolvers.emplace_back(entries[g].index, entries[g].presentation);
        placed += set.size();
        if (opts.progress) opts.progress(placed, entries.size());
        return id;
    };
    std::vector<std::size_t> all(entries.size());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
    if (all.empty()) {
        tree.nodes.emplace_back();
    } else {
        build(all, 0);
    }
    std::sort(tree.resolvers.begin(), tree.resolvers.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    return tree;
}

IdentifyResult identify(const DecisionTree& tree, const GroupPtr& G, const IdentifyOptions& opts) {
    if (G->order() != tree.order())
        throw InvalidInput("identify: group of order " + std::to_string(G->order()) + " given to a tree for order " +
                           std::to_string(tree.order()));
    IdentifyResult res;
    std::uint32_t node = 0;
    while (tree.nodes.at(node).step) {
        const auto& t = tree.nodes[node];
        res.path.push_back(*t.step);
        const auto k = invariant_step(G, *t.step, tree.schedule).key();
        const auto it = std::lower_bound(t.children.begin(), t.children.end(), k,
                                         [](const auto& child, const std::string& s) { return child.first < s; });
        if (it == t.children.end() || it->first != k)
            throw IntegrityError("group not of this catalog (no branch at step " + t.step->to_string() + ")");
        node = it->second;
    }
    const auto& leaf = tree.nodes[node];
    if (leaf.candidates.empty()) throw IntegrityError("group not of this catalog (empty leaf)");
    if (leaf.candidates.size() == 1) {
        res.index = leaf.candidates[0];
        return res;
    }
    res.resolved_by_isomorphism = true;
    for (auto idx : leaf.candidates) {
        const auto it = std::lower_bound(tree.resolvers.begin(), tree.resolvers.end(), idx,
                                         [](const auto& r, std::uint32_t i) { return r.first < i; });
        if (it == tree.resolvers.end() || it->first != idx)
            throw IntegrityError("tree has no presentation for candidate " + std::to_string(idx));
        if (random_iso_test(G, make_group(it->second), opts.random_budget, opts.seed).isomorphic) {
            res.index = idx;
            return res;
        }
    }
    throw IntegrityError("group not of this catalog (no candidate is isomorphic)");
}

std::string serialize_tree(const DecisionTree& tree) {
    std::ostringstream out;
    out << "pgf-idtree v1\n";
    out << "order " << tree.p << ' ' << tree.n << '\n';
    out << "schedule ";
    if (tree.schedule.empty()) out << '-';
    for (std::size_t i = 0; i < tree.schedule.size(); ++i) out << (i ? "," : "") << tree.schedule[i];
    out << '\n';
    out << "catalog " << hex64(tree.catalog_checksum) << ' ' << tree.catalog_count << '\n';
    out << "nodes " << tree.nodes.size() << '\n';
    for (std::size_t id = 0; id < tree.nodes.size(); ++id) {
        const auto& t = tree.nodes[id];
        if (t.step) {
            out << "node " << id << " split " << t.step->to_string() << ' ' << t.children.size() << '\n';
            for (const auto& [k, c] : t.children) out << "child " << c << ' ' << k << '\n';
        } else {
            out << "node " << id << " leaf ";
            if (t.candidates.empty()) out << '-';
            for (std::size_t i = 0; i < t.candidates.size(); ++i) out << (i ? "," : "") << t.candidates[i];
            out << '\n';
        }
    }
    out << "resolvers " << tree.resolvers.size() << '\n';
    for (const auto& [idx, pres] : tree.resolvers) out << "resolver " << idx << ' ' << pres.to_string() << '\n';
    const std::string body = out.str();
    return body + "checksum " + hex64(fnv1a(body)) + "\n";
}

namespace {

class LineReader {
public:
    explicit LineReader(std::string_view text) : text_(text) {}

    std::string_view next() {
        line_start_ = pos_;
        if (pos_ >= text_.size()) fail("unexpected end of file");
        const auto nl = text_.find('\n', pos_);
        if (nl == std::string_view::npos) {
            pos_ = text_.size();
            fail("unterminated last line (truncated file)");
        }
        pos_ = nl + 1;
        return text_.substr(line_start_, nl - line_start_);
    }
    [[noreturn]] void fail(const std::string& msg) const {
        throw InvalidInput("tree file: " + msg + " at byte " + std::to_string(line_start_));
    }
    std::size_t position() const { return pos_; }
    bool at_end() const { return pos_ >= text_.size(); }

private:
    std::string_view text_;
    std::size_t pos_ = 0;
    std::size_t line_start_ = 0;
};

std::vector<std::string_view> words(std::string_view line, std::size_t max_parts) {
    std::vector<std::string_view> out;
    std::size_t pos = 0;
    while (pos <= line.size()) {
        if (out.size() + 1 == max_parts) {
            out.push_back(line.substr(pos));
            break;
        }
        const auto sp = line.find(' ', pos);
        out.push_back(line.substr(pos, sp == std::string_view::npos ? std::string_view::npos : sp - pos));
        if (sp == std::string_view::npos) break;
        pos = sp + 1;
    }
    return out;
}

template <class T>
T number(const LineReader& in, std::string_view s, int base = 10) {
    T v{};
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v, base);
    if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size())
        in.fail("bad number '" + std::string(s) + "'");
    return v;
}

std::vector<std::uint32_t> number_list(const LineReader& in, std::string_view s) {
    std::vector<std::uint32_t> out;
    if (s == "-") return out;
    std::size_t pos = 0;
    while (true) {
        const auto comma = s.find(',', pos);
        out.push_back(number<std::uint32_t>(
            in, s.substr(pos, comma == std::string_view::npos ? std::string_view::npos : comma - pos)));
        if (comma == std::string_view::npos) break;
        pos = comma + 1;
    }
    return out;
}

}  // namespace

DecisionTree parse_tree(std::string_view text) {
    LineReader in(text);
    DecisionTree tree;
    auto expect = [&](std::string_view line, std::string_view tag, std::size_t parts) {
        auto w = words(line, parts);
        if (w.size() != parts || w[0] != tag) in.fail("expected '" + std::string(tag) + "' record");
        return w;
    };
    const auto magic = in.next();
    if (magic.substr(0, 11) != "pgf-idtree ") in.fail("not a tree file");
    if (magic != "pgf-idtree v1") in.fail("unsupported tree version '" + std::string(magic.substr(11)) + "'");
    auto w = expect(in.next(), "order", 3);
    tree.p = number<int>(in, w[1]);
    tree.n = number<int>(in, w[2]);
    if (!is_prime(tree.p) || tree.n < 0 || tree.n > 12) in.fail("bad order record");
    w = expect(in.next(), "schedule", 2);
    tree.schedule = number_list(in, w[1]);
    w = expect(in.next(), "catalog", 3);
    if (w[1].size() != 16) in.fail("bad catalog checksum");
    tree.catalog_checksum = number<std::uint64_t>(in, w[1], 16);
    tree.catalog_count = number<std::uint32_t>(in, w[2]);
    w = expect(in.next(), "nodes", 2);
    const auto count = number<std::uint32_t>(in, w[1]);
    for (std::uint32_t id = 0; id < count; ++id) {
        const auto line = in.next();
        // leaf records have four words, split records five
        const auto parts = words(line, 5);
        if (parts.size() < 4 || parts[0] != "node" || number<std::uint32_t>(in, parts[1]) != id)
            in.fail("expected node " + std::to_string(id));
        TreeNode t;
        if (parts[2] == "leaf" && parts.size() == 4) {
            t.candidates = number_list(in, parts[3]);
        } else if (parts[2] == "split" && parts.size() == 5) {
            try {
                t.step = StepLabel::parse(parts[3]);
            } catch (const InvalidInput&) {
                in.fail("bad step label");
            }
            const auto k = number<std::uint32_t>(in, parts[4]);
            for (std::uint32_t c = 0; c < k; ++c) {
                const auto cw = expect(in.next(), "child", 3);
                t.children.emplace_back(std::string(cw[2]), number<std::uint32_t>(in, cw[1]));
            }
        } else {
            in.fail("bad node record");
        }
        tree.nodes.push_back(std::move(t));
    }
    w = expect(in.next(), "resolvers", 2);
    const auto nres = number<std::uint32_t>(in, w[1]);
    for (std::uint32_t i = 0; i < nres; ++i) {
        const auto rw = expect(in.next(), "resolver", 3);
        try {
            tree.resolvers.emplace_back(number<std::uint32_t>(in, rw[1]), PcPresentation::parse(rw[2]));
        } catch (const InvalidInput& e) {
            in.fail(std::string("bad resolver presentation: ") + e.what());
        }
    }
    const std::size_t body_end = in.position();
    w = expect(in.next(), "checksum", 2);
    if (!in.at_end()) {
        in.next();
        in.fail("trailing data after checksum");
    }
    if (w[1].size() != 16 || number<std::uint64_t>(in, w[1], 16) != fnv1a(text.substr(0, body_end)))
        throw IntegrityError("tree file: checksum mismatch");

    // structural integrity: every node reached once, leaves partition 1..count
    if (tree.nodes.empty()) throw IntegrityError("tree file: no nodes");
    std::vector<int> refs(tree.nodes.size(), 0);
    std::vector<int> seen(tree.catalog_count + 1, 0);
    for (const auto& t : tree.nodes) {
        for (std::size_t i = 0; i < t.children.size(); ++i) {
            if (t.children[i].second == 0 || t.children[i].second >= tree.nodes.size())
                throw IntegrityError("tree file: child reference out of range");
            ++refs[t.children[i].second];
            if (i && !(t.children[i - 1].first < t.children[i].first))
                throw IntegrityError("tree file: child keys not sorted");
        }
        for (auto c : t.candidates) {
            if (c == 0 || c > tree.catalog_count) throw IntegrityError("tree file: leaf index out of range");
            ++seen[c];
        }
        if (t.step && t.step->step == 7 &&
            std::find(tree.schedule.begin(), tree.schedule.end(), t.step->power) == tree.schedule.end())
            throw IntegrityError("tree file: power step outside the schedule");
    }
    for (std::size_t i = 1; i < refs.size(); ++i)
        if (refs[i] != 1) throw IntegrityError("tree file: node " + std::to_string(i) + " is not a tree child");
    for (std::uint32_t c = 1; c <= tree.catalog_count; ++c)
        if (seen[c] != 1) throw IntegrityError("tree file: leaves do not partition the catalog");
    for (const auto& t : tree.nodes)
        if (t.candidates.size() > 1)
            for (auto c : t.candidates)
                if (std::none_of(tree.resolvers.begin(), tree.resolvers.end(),
                                 [c](const auto& r) { return r.first == c; }))
                    throw IntegrityError("tree file: missing resolver presentation");
    for (const auto& [idx, pres] : tree.resolvers)
        if (pres.prime() != tree.p || pres.ngens() != tree.n)
            throw IntegrityError("tree file: resolver of the wrong order");
    return tree;
}

void save_tree(const DecisionTree& tree, const std::filesystem::path& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw InvalidInput("cannot write " + path.string());
    f << serialize_tree(tree);
    if (!f) throw InvalidInput("write failed: " + path.string());
}

DecisionTree load_tree(const std::filesystem::path& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw InvalidInput("cannot read " + path.string());
    std::ostringstream ss;
    ss << f.rdbuf();
    return parse_tree(ss.str());
}

void check_tree_catalog(const DecisionTree& tree, int p, int n, const std::vector<CatalogEntry>& entries) {
    if (tree.p != p || tree.n != n || tree.catalog_count != entries.size() ||
        tree.catalog_checksum != catalog_checksum(p, n, entries))
        throw IntegrityError("tree was not built from this catalog (checksum mismatch)");
}

}  // namespace pgf
