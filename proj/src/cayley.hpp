#pragma once

// Cayley-graph codes of generated subgroups. Shared by the canonical search,
// the automorphism enumeration and the abstract table isomorphism test.

#include <cstdint>
#include <span>
#include <vector>

namespace pgf::detail {

struct CayleyScratch {
    std::vector<std::uint32_t> stamp;
    std::vector<std::uint32_t> index;
    std::vector<std::uint32_t> queue;  // BFS order of the last call
    std::uint32_t generation = 0;

    void prepare(std::size_t order) {
        if (stamp.size() != order) {
            stamp.assign(order, 0);
            index.assign(order, 0);
            generation = 0;
        }
        if (++generation == 0) {
            std::fill(stamp.begin(), stamp.end(), 0);
            generation = 1;
        }
    }
};

/// Appends lead, then for each element of <gens> in BFS discovery order the
/// discovery indices of x*g for every g in gens. Compares against ref on the
/// fly: returns +1 (early, code incomplete) as soon as the code exceeds ref,
/// -1 if smaller, 0 if equal. Without ref the full code is produced and 0 returned.
template <class Mul>
int cayley_code(std::uint32_t order, const Mul& mul, std::uint32_t identity, std::span<const std::uint32_t> gens,
                std::uint32_t lead, CayleyScratch& s, const std::vector<std::uint32_t>* ref,
                std::vector<std::uint32_t>& out) {
    s.prepare(order);
    out.clear();
    s.queue.clear();
    int state = 0;
    auto emit = [&](std::uint32_t v) -> bool {
        const std::size_t pos = out.size();
        out.push_back(v);
        if (!ref || state != 0) return true;
        if (pos >= ref->size() || v > (*ref)[pos]) {
            state = 1;
            return false;
        }
        if (v < (*ref)[pos]) state = -1;
        return true;
    };
    if (!emit(lead)) return 1;
    s.stamp[identity] = s.generation;
    s.index[identity] = 0;
    s.queue.push_back(identity);
    for (std::size_t head = 0; head < s.queue.size(); ++head) {
        const std::uint32_t x = s.queue[head];
        for (std::uint32_t g : gens) {
            const std::uint32_t y = mul(x, g);
            if (s.stamp[y] != s.generation) {
                s.stamp[y] = s.generation;
                s.index[y] = static_cast<std::uint32_t>(s.queue.size());
                s.queue.push_back(y);
            }
            if (!emit(s.index[y])) return 1;
        }
    }
    if (ref && state == 0 && out.size() < ref->size()) state = -1;
    return state;
}

}  // namespace pgf::detail
