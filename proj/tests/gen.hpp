#pragma once

// Deterministic random expression generator shared by the property tests.
// Shapes stay small (1..4 blocks, entries within a few units) so exact
// homology and normalization stay fast while still covering stacked
// junctions, self-gluings and partially filled named blocks.

#include "chainfill/manifolds.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <string>
#include <vector>

namespace chainfill::testgen {

using Rng = std::mt19937;

inline long long rint(Rng& rng, long long lo, long long hi) {
    return std::uniform_int_distribution<long long>(lo, hi)(rng);
}

inline FiberPair random_fiber(Rng& rng, bool allow_zero = false) {
    for (;;) {
        if (allow_zero && rint(rng, 0, 9) == 0) return {0, rint(rng, 0, 1) ? 1 : -1};
        long long p = rint(rng, 1, 4);
        long long q = rint(rng, -4, 4);
        if (std::gcd(p, q < 0 ? -q : q) != 1) continue;
        return {p, q};
    }
}

inline Mat2 random_gluing(Rng& rng) {
    Mat2 m{0, 1, 1, 0};
    int tw = static_cast<int>(rint(rng, 0, 3));
    for (int i = 0; i < tw; ++i) {
        long long k = rint(rng, -2, 2);
        if (rint(rng, 0, 1))
            m = Mat2{m.a + k * m.b, m.b, m.c + k * m.d, m.d};
        else
            m = Mat2{m.a, m.b, m.c - k * m.a, m.d - k * m.b};
    }
    if (rint(rng, 0, 1)) m = m.neg();
    return m;
}

inline SeifertBlock random_seifert(Rng& rng, int boundary, bool allow_zero_fiber) {
    SeifertBlock s;
    int kind = static_cast<int>(rint(rng, 0, 9));
    if (kind < 7)
        s.base = BaseSurface{true, 0, boundary};
    else if (kind < 9)
        s.base = BaseSurface{true, 1, boundary};
    else
        s.base = BaseSurface{false, 1, boundary};
    int nf = static_cast<int>(rint(rng, 0, 3));
    for (int i = 0; i < nf; ++i) s.fibers.push_back(random_fiber(rng, allow_zero_fiber));
    return s;
}

inline NamedBlock random_named(Rng& rng, int free_cusps) {
    static const std::pair<const char*, int> pool[] = {
        {"M3", 3}, {"M4", 4}, {"M5", 5}, {"W", 3}, {"N4", 4}, {"N5", 5}};
    std::vector<std::pair<const char*, int>> ok;
    for (const auto& p : pool)
        if (p.second >= free_cusps) ok.push_back(p);
    const auto& pick = ok[rint(rng, 0, static_cast<long long>(ok.size()) - 1)];
    NamedBlock n;
    n.name = pick.first;
    n.fillings.assign(pick.second, std::nullopt);
    int to_fill = pick.second - free_cusps;
    std::vector<int> idx(pick.second);
    std::iota(idx.begin(), idx.end(), 0);
    std::shuffle(idx.begin(), idx.end(), rng);
    for (int i = 0; i < to_fill; ++i) {
        for (;;) {
            long long p = rint(rng, -4, 4);
            long long q = rint(rng, 0, 3);
            if (p == 0 && q == 0) continue;
            if (std::gcd(p < 0 ? -p : p, q) > 1) continue;
            n.fillings[idx[i]] = make_slope(p, q);
            break;
        }
    }
    return n;
}

struct GenOptions {
    bool allow_named = false;
    bool allow_self = false;
    bool allow_zero_fiber = false;
    int max_blocks = 4;
};

inline GraphManifold random_chain(Rng& rng, const GenOptions& opt = {}) {
    GraphManifold g;
    int n = static_cast<int>(rint(rng, 1, opt.max_blocks));
    std::vector<int> stack(n > 1 ? n - 1 : 0, 1);
    for (int& s : stack)
        if (rint(rng, 0, 4) == 0) s = 2;
    std::vector<int> need(n, 0);
    for (int j = 0; j + 1 < n; ++j) {
        need[j] += stack[j];
        need[j + 1] += stack[j];
    }
    int total_free = 0;
    for (int i = 0; i < n; ++i) {
        int extra = static_cast<int>(rint(rng, 0, 5));
        extra = extra >= 4 ? extra - 3 : 0;
        int boundary = need[i] + extra;
        total_free += extra;
        if (opt.allow_named && rint(rng, 0, 4) == 0 && boundary >= 1 && boundary <= 5)
            g.blocks.push_back(random_named(rng, boundary));
        else
            g.blocks.push_back(random_seifert(rng, boundary, opt.allow_zero_fiber));
    }
    for (int j = 0; j + 1 < n; ++j) {
        std::vector<Mat2> st;
        for (int s = 0; s < stack[j]; ++s) st.push_back(random_gluing(rng));
        g.junctions.push_back(std::move(st));
    }
    if (opt.allow_self && total_free >= 2 && rint(rng, 0, 2) == 0)
        g.self_gluing = random_gluing(rng);
    return g;
}

}  // namespace chainfill::testgen
