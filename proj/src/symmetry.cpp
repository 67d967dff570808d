#include "chainfill/symmetry.hpp"

#include "chainfill/registry.hpp"

#include <algorithm>
#include <set>
#include <sstream>
#include <stdexcept>

namespace chainfill {

Slope apply_slope_map(const Mat2& m, const Slope& s) {
    long long num = m.a * s.p + m.b * s.q;
    long long den = m.c * s.p + m.d * s.q;
    if (num == 0 && den == 0) throw std::invalid_argument("slope map is singular");
    return make_slope(num, den);
}

CuspSymmetry identity_symmetry(int cusps) {
    CuspSymmetry s;
    s.perm.resize(cusps);
    for (int i = 0; i < cusps; ++i) s.perm[i] = i;
    s.maps.assign(cusps, Mat2{});
    return s;
}

static void check_shape(const CuspSymmetry& s) {
    int n = static_cast<int>(s.perm.size());
    if (s.maps.size() != s.perm.size())
        throw std::invalid_argument("symmetry has mismatched perm/map sizes");
    std::vector<char> seen(n, 0);
    for (int v : s.perm) {
        if (v < 0 || v >= n || seen[v]) throw std::invalid_argument("perm is not a bijection");
        seen[v] = 1;
    }
    for (const Mat2& m : s.maps)
        if (m.det() != 1 && m.det() != -1)
            throw std::invalid_argument("slope map must have det +-1");
}

CuspSymmetry compose(const CuspSymmetry& s1, const CuspSymmetry& s2) {
    if (s1.perm.size() != s2.perm.size())
        throw std::invalid_argument("composing symmetries of different cusp counts");
    int n = static_cast<int>(s1.perm.size());
    CuspSymmetry r;
    r.perm.resize(n);
    r.maps.resize(n);
    for (int i = 0; i < n; ++i) {
        r.perm[i] = s1.perm[s2.perm[i]];
        r.maps[i] = mul(s1.maps[s2.perm[i]], s2.maps[i]);
    }
    return r;
}

FillingTuple act(const CuspSymmetry& s, const FillingTuple& t) {
    if (t.size() != s.perm.size()) throw std::invalid_argument("tuple length mismatch");
    FillingTuple out(t.size());
    for (size_t i = 0; i < t.size(); ++i)
        out[s.perm[i]] = t[i] ? std::optional<Slope>(apply_slope_map(s.maps[i], *t[i]))
                              : std::nullopt;
    return out;
}

// Sign-normalized key so that m and -m collapse (projective action).
static std::string element_key(const CuspSymmetry& s) {
    std::ostringstream os;
    for (int v : s.perm) os << v << ',';
    os << '|';
    for (Mat2 m : s.maps) {
        long long lead[4] = {m.a, m.b, m.c, m.d};
        for (long long v : lead)
            if (v != 0) {
                if (v < 0) m = m.neg();
                break;
            }
        os << m.a << ',' << m.b << ',' << m.c << ',' << m.d << ';';
    }
    return os.str();
}

SymmetryGroup close(const std::vector<CuspSymmetry>& generators, size_t max_size,
                    std::optional<long long> declared_order) {
    if (max_size < 1) throw std::invalid_argument("max_size must be positive");
    if (generators.empty()) throw std::invalid_argument("no generators");
    for (const CuspSymmetry& g : generators) check_shape(g);

    SymmetryGroup grp;
    std::set<std::string> seen;
    auto push = [&](const CuspSymmetry& e) {
        if (!seen.insert(element_key(e)).second) return false;
        if (grp.elements.size() >= max_size)
            throw std::runtime_error("symmetry closure exceeds max_size");
        grp.elements.push_back(e);
        return true;
    };
    push(identity_symmetry(static_cast<int>(generators[0].perm.size())));
    for (size_t head = 0; head < grp.elements.size(); ++head) {
        CuspSymmetry cur = grp.elements[head];
        for (const CuspSymmetry& g : generators) push(compose(g, cur));
    }
    if (declared_order && static_cast<long long>(grp.elements.size()) != *declared_order)
        throw std::runtime_error("symmetry closure has order " +
                                 std::to_string(grp.elements.size()) + ", declared " +
                                 std::to_string(*declared_order));
    return grp;
}

bool slope_less(const std::optional<Slope>& x, const std::optional<Slope>& y) {
    if (!x || !y) return !x && y;
    bool xi = x->q == 0, yi = y->q == 0;
    if (xi || yi) return xi && !yi;
    return x->p * y->q < y->p * x->q;
}

bool tuple_less(const FillingTuple& x, const FillingTuple& y) {
    return std::lexicographical_compare(
        x.begin(), x.end(), y.begin(), y.end(),
        [](const std::optional<Slope>& a, const std::optional<Slope>& b) {
            return slope_less(a, b);
        });
}

std::vector<FillingTuple> orbit(const SymmetryGroup& g, const FillingTuple& t) {
    std::vector<FillingTuple> out;
    for (const CuspSymmetry& s : g.elements) {
        FillingTuple u = act(s, t);
        bool fresh = true;
        for (const FillingTuple& v : out)
            if (v == u) {
                fresh = false;
                break;
            }
        if (fresh) out.push_back(std::move(u));
    }
    std::sort(out.begin(), out.end(), tuple_less);
    return out;
}

FillingTuple canonical_rep(const SymmetryGroup& g, const FillingTuple& t) {
    FillingTuple best = t;
    for (const CuspSymmetry& s : g.elements) {
        FillingTuple u = act(s, t);
        if (tuple_less(u, best)) best = std::move(u);
    }
    return best;
}

std::vector<Slope> slope_orbit(const Mat2& m, const Slope& s, size_t max_size) {
    std::vector<Slope> out{s};
    Slope cur = s;
    for (;;) {
        cur = apply_slope_map(m, cur);
        if (cur == s) break;
        if (std::find(out.begin(), out.end(), cur) != out.end()) break;
        if (out.size() >= max_size) throw std::runtime_error("slope orbit exceeds max_size");
        out.push_back(cur);
    }
    std::sort(out.begin(), out.end(), [](const Slope& a, const Slope& b) {
        return slope_less(a, b);
    });
    return out;
}

SymmetryGroup family_group(const std::string& family) {
    const FamilyInfo& f = Registry::instance().family(family);
    std::vector<CuspSymmetry> gens;
    for (const SymmetryGenerator& g : f.symmetry.generators) {
        CuspSymmetry s;
        s.perm = g.perm;
        s.maps.assign(g.perm.size(), Mat2{});
        gens.push_back(std::move(s));
    }
    std::optional<long long> declared;
    if (f.symmetry.generators_complete) declared = f.symmetry.declared_order;
    return close(gens, 4096, declared);
}

bool factors(const std::string& family, const FillingTuple& t) {
    return factor_reason(family, t).substr(0, 4) == "true";
}

std::string factor_reason(const std::string& family, const FillingTuple& t) {
    const FamilyInfo& f = Registry::instance().family(family);
    if (static_cast<int>(t.size()) != f.cusps)
        throw std::invalid_argument("tuple length mismatch for " + family);
    for (const std::optional<Slope>& s : t)
        if (s)
            for (const Slope& r : f.factor.slopes)
                if (*s == r) return "true (slope " + slope_str(r) + ")";
    if (f.factor.consecutive_pair) {
        const Slope pr = *f.factor.consecutive_pair;
        for (auto [i, j] : cyclic_edges(f.cusps))
            if (t[i] && t[j] && *t[i] == pr && *t[j] == pr)
                return "true (pair (" + slope_str(pr) + "," + slope_str(pr) +
                       ") consecutive)";
    }
    return "false";
}

}  // namespace chainfill
