#include "chainfill/moves.hpp"

#include "chainfill/homology.hpp"
#include "chainfill/notation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <set>
#include <stdexcept>
#include <tuple>
#include <utility>
#include <vector>

namespace chainfill {

namespace {

long long gcd_ll(long long a, long long b) {
    return std::gcd(a < 0 ? -a : a, b < 0 ? -b : b);
}

long long mod_pos(long long x, long long m) {
    x %= m;
    if (x < 0) x += m;
    return x;
}

// a*x + b*y = gcd(a,b)
void ext_gcd(long long a, long long b, long long& x, long long& y) {
    if (b == 0) {
        x = a < 0 ? -1 : 1;
        y = 0;
        return;
    }
    long long x1, y1;
    ext_gcd(b, a % b, x1, y1);
    x = y1;
    y = x1 - (a / b) * y1;
}

// A * [[1,0],[k,1]]: twist at the left port of a gluing
Mat2 col_twist(const Mat2& m, long long k) {
    return {m.a + k * m.b, m.b, m.c + k * m.d, m.d};
}

// [[1,0],[-k,1]] * A: twist at the right port
Mat2 row_twist(const Mat2& m, long long k) {
    return {m.a, m.b, m.c - k * m.a, m.d - k * m.b};
}

// diag(1,-1) * A * diag(1,-1): both fiber orientations reversed
Mat2 mirror_mat(const Mat2& m) { return {m.a, -m.b, -m.c, m.d}; }

Mat2 trade_left_to_moebius(const Mat2& m) { return {m.b, m.b - m.a, m.d, m.d - m.c}; }
Mat2 trade_left_to_disc(const Mat2& m) { return {m.a - m.b, m.a, m.c - m.d, m.c}; }
Mat2 trade_right_to_moebius(const Mat2& m) { return {m.a + m.c, m.b + m.d, -m.a, -m.b}; }
Mat2 trade_right_to_disc(const Mat2& m) { return {-m.c, -m.d, m.a + m.c, m.b + m.d}; }

bool exact_d2121(const Block& b) {
    const auto* s = std::get_if<SeifertBlock>(&b);
    return s && s->base == kDisc && s->fibers.size() == 2 &&
           s->fibers[0] == FiberPair{2, 1} && s->fibers[1] == FiberPair{2, 1};
}

bool plain_moebius(const Block& b) {
    const auto* s = std::get_if<SeifertBlock>(&b);
    return s && s->base == kMoebius && s->fibers.empty();
}

int cusp_of_port(const NamedBlock& n, int port) {
    int seen = 0;
    for (size_t i = 0; i < n.fillings.size(); ++i) {
        if (n.fillings[i]) continue;
        if (seen == port) return static_cast<int>(i);
        ++seen;
    }
    return -1;
}

// Where a site's matrix lives; entries parallel compute_ports(g).sites.
struct SiteLoc {
    bool self = false;
    int junction = -1;
    int stack = -1;
};

std::vector<SiteLoc> site_locations(const GraphManifold& g) {
    std::vector<SiteLoc> locs;
    for (size_t j = 0; j < g.junctions.size(); ++j)
        for (size_t s = 0; s < g.junctions[j].size(); ++s)
            locs.push_back({false, static_cast<int>(j), static_cast<int>(s)});
    if (g.self_gluing) locs.push_back({true, -1, -1});
    return locs;
}

Mat2& site_matrix(GraphManifold& g, const SiteLoc& loc) {
    if (loc.self) return *g.self_gluing;
    return g.junctions[loc.junction][loc.stack];
}

// A gluing may be negated only when its torus separates the expression:
// reversing fiber and section orientations on one side then fixes every
// other recorded matrix. Parallel gluings and loops admit no such side.
bool site_is_bridge(const GraphManifold& g, const PortTable& t, int site) {
    const GluingSite& s = t.sites[site];
    if (s.left.block == s.right.block) return false;
    std::vector<int> parent(g.blocks.size());
    for (size_t i = 0; i < parent.size(); ++i) parent[i] = static_cast<int>(i);
    auto find = [&](int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    for (size_t k = 0; k < t.sites.size(); ++k) {
        if (static_cast<int>(k) == site) continue;
        int a = find(t.sites[k].left.block), b = find(t.sites[k].right.block);
        if (a != b) parent[a] = b;
    }
    return find(s.left.block) != find(s.right.block);
}

// Slope induced on the surviving side when the other side of a gluing is a
// fibered solid torus (D,(p,q)), whose meridian is q*h - p*c.
FiberPair meridian_cap(const FiberPair& f, const Mat2& m, bool dying_left) {
    if (dying_left) return {f.q * m.b - f.p * m.a, f.q * m.d - f.p * m.c};
    return {f.q * m.b + f.p * m.d, -(f.q * m.a + f.p * m.c)};
}

LensSpace canonical_lens(long long p, long long q) {
    if (p < 0) {
        p = -p;
        q = -q;
    }
    if (p == 0) return {0, 1};
    q = mod_pos(q, p);
    if (p == 1) return {1, 0};
    if (gcd_ll(p, q) != 1) return {p, q};
    long long x, y;
    ext_gcd(q, p, x, y);
    long long qi = mod_pos(x, p);
    long long best = std::min(std::min(q, p - q), std::min(qi, p - qi));
    return {p, best};
}

// (S2,(a,b),(c,d)) as a lens space: fill the fibered solid torus (D,(a,b))
// along the meridian of the complementary (D,(c,d)).
LensSpace lens_of_two_fibers(const FiberPair& f1, const FiberPair& f2) {
    long long t, s;
    ext_gcd(f1.p, f1.q, t, s);
    return canonical_lens(f1.p * f2.q + f1.q * f2.p, f2.p * t - f2.q * s);
}

[[noreturn]] void bad(const std::string& msg) { throw std::invalid_argument(msg); }

ManifoldExpr combine_parts(std::vector<ManifoldExpr> parts) {
    if (parts.empty()) return make_expr(LensSpace{1, 0});
    if (parts.size() == 1) return std::move(parts[0]);
    ConnectedSum s;
    s.parts = std::move(parts);
    return make_expr(std::move(s));
}

// Normalizes fiber coefficients blockwise: pair signs fixed, (1,q) dropped or
// merged into a closed block's (1,e) carrier, q reduced mod p, fibers sorted.
// Bounded blocks push the accumulated twist out through a free boundary torus
// when one exists, otherwise into the first gluing they meet.
bool reduce_fibers_pass(GraphManifold& g) {
    PortTable t = compute_ports(g);
    auto locs = site_locations(g);
    bool changed = false;
    for (size_t i = 0; i < g.blocks.size(); ++i) {
        auto* s = std::get_if<SeifertBlock>(&g.blocks[i]);
        if (!s) continue;
        bool closed = s->base.boundary == 0;
        std::vector<FiberPair> nf;
        long long net = 0;
        for (FiberPair f : s->fibers) {
            if (f.p < 0 || (f.p == 0 && f.q < 0)) {
                f.p = -f.p;
                f.q = -f.q;
            }
            if (f.p == 0) {
                nf.push_back(f);
                continue;
            }
            if (f.p == 1) {
                net += f.q;
                continue;
            }
            long long q0 = mod_pos(f.q, f.p);
            net += (f.q - q0) / f.p;
            nf.push_back({f.p, q0});
        }
        std::sort(nf.begin(), nf.end(), [](const FiberPair& x, const FiberPair& y) {
            return std::tie(x.p, x.q) < std::tie(y.p, y.q);
        });
        if (closed) {
            if (net != 0) nf.push_back({1, net});
        } else if (net != 0) {
            if (t.capacity[i] > t.used[i]) {
                // absorbed by an unmarked free boundary torus
            } else {
                bool done = false;
                for (size_t si = 0; si < t.sites.size() && !done; ++si) {
                    if (t.sites[si].left.block == static_cast<int>(i)) {
                        Mat2& m = site_matrix(g, locs[si]);
                        m = col_twist(m, -net);
                        done = true;
                    } else if (t.sites[si].right.block == static_cast<int>(i)) {
                        Mat2& m = site_matrix(g, locs[si]);
                        m = row_twist(m, -net);
                        done = true;
                    }
                }
                if (!done) nf.push_back({1, net});
            }
        }
        if (nf != s->fibers) {
            s->fibers = std::move(nf);
            changed = true;
        }
    }
    return changed;
}

// Splits off everything a block with a (0,1) fiber contributes: one lens
// summand per remaining fiber, S2xS1 per base handle and per lost loop, a
// solid torus per free boundary torus, and a Dehn filling on each neighbour
// along the image of the vanishing fiber. Returns nothing when the leftover
// pieces cannot be written as rows again.
std::optional<std::vector<ManifoldExpr>> dissolve_block(const GraphManifold& g, int bi) {
    PortTable t = compute_ports(g);
    if (!t.errors.empty()) return std::nullopt;
    const auto* B = std::get_if<SeifertBlock>(&g.blocks[bi]);
    if (!B) return std::nullopt;
    int zf = -1;
    for (size_t j = 0; j < B->fibers.size(); ++j)
        if (B->fibers[j].p == 0 && (B->fibers[j].q == 1 || B->fibers[j].q == -1)) {
            zf = static_cast<int>(j);
            break;
        }
    if (zf < 0) return std::nullopt;

    std::vector<ManifoldExpr> parts;
    for (size_t j = 0; j < B->fibers.size(); ++j)
        if (static_cast<int>(j) != zf)
            parts.push_back(make_expr(LensSpace{B->fibers[j].p, B->fibers[j].q}));
    int handles = B->base.orientable ? 2 * B->base.genus : B->base.genus;
    for (int j = 0; j < handles; ++j) parts.push_back(make_expr(LensSpace{0, 1}));
    for (int j = t.used[bi]; j < t.capacity[bi]; ++j) parts.push_back(make_expr(solid_torus()));

    struct Cap {
        int block;
        int port;
        FiberPair f;
    };
    std::vector<Cap> caps;
    std::vector<int> survivors;
    auto locs = site_locations(g);
    for (size_t si = 0; si < t.sites.size(); ++si) {
        const GluingSite& s = t.sites[si];
        bool L = s.left.block == bi, R = s.right.block == bi;
        if (L && R)
            parts.push_back(make_expr(LensSpace{s.m.b, s.m.a}));
        else if (L)
            caps.push_back({s.right.block, s.right.port, meridian_cap({0, 1}, s.m, true)});
        else if (R)
            caps.push_back({s.left.block, s.left.port, meridian_cap({0, 1}, s.m, false)});
        else
            survivors.push_back(static_cast<int>(si));
    }

    std::vector<Block> capped = g.blocks;
    for (const Cap& c : caps)
        if (std::holds_alternative<NamedBlock>(g.blocks[c.block])) {
            int cusp = cusp_of_port(std::get<NamedBlock>(g.blocks[c.block]), c.port);
            if (cusp < 0) return std::nullopt;
            std::get<NamedBlock>(capped[c.block]).fillings[cusp] = make_slope(c.f.p, c.f.q);
        }
    for (const Cap& c : caps)
        if (auto* sb = std::get_if<SeifertBlock>(&capped[c.block])) {
            sb->base.boundary -= 1;
            sb->fibers.push_back(c.f);
        }

    int V0 = static_cast<int>(g.blocks.size());
    std::vector<char> junction_alive(std::max<size_t>(g.junctions.size(), 1), 0);
    int self_site = -1;
    std::vector<int> surv_glued(V0, 0);
    for (int si : survivors) {
        if (locs[si].self)
            self_site = si;
        else
            junction_alive[locs[si].junction] = 1;
        ++surv_glued[t.sites[si].left.block];
        ++surv_glued[t.sites[si].right.block];
    }

    std::vector<std::pair<int, int>> segs;
    for (int b = 0; b < V0; ++b) {
        if (b == bi) continue;
        if (!segs.empty() && segs.back().second == b - 1 && junction_alive[b - 1])
            segs.back().second = b;
        else
            segs.emplace_back(b, b);
    }
    auto seg_of = [&](int b) {
        for (size_t i = 0; i < segs.size(); ++i)
            if (segs[i].first <= b && b <= segs[i].second) return static_cast<int>(i);
        return -1;
    };

    auto build_segment = [&](int lo, int hi, bool rev) -> std::optional<GraphManifold> {
        GraphManifold c;
        if (!rev) {
            for (int b = lo; b <= hi; ++b) c.blocks.push_back(capped[b]);
            for (int b = lo; b < hi; ++b) c.junctions.push_back(g.junctions[b]);
        } else {
            for (int b = lo; b <= hi; ++b)
                if (std::holds_alternative<NamedBlock>(g.blocks[b]) && surv_glued[b] >= 2)
                    return std::nullopt;
            for (int b = hi; b >= lo; --b) c.blocks.push_back(capped[b]);
            for (int b = hi - 1; b >= lo; --b) {
                std::vector<Mat2> stack;
                for (const Mat2& m : g.junctions[b]) stack.push_back(m.inverse());
                c.junctions.push_back(std::move(stack));
            }
        }
        return c;
    };

    std::vector<GraphManifold> comps;
    int joined = -1, joined2 = -1;
    if (self_site >= 0) {
        const GluingSite& ss = t.sites[self_site];
        int u = ss.left.block, v = ss.right.block;
        int su = seg_of(u), sv = seg_of(v);
        if (su < 0 || sv < 0) return std::nullopt;
        if (su == sv) {
            auto c = build_segment(segs[su].first, segs[su].second, false);
            if (!c) return std::nullopt;
            c->self_gluing = ss.m;
            PortTable t2 = compute_ports(*c);
            if (!t2.errors.empty() || t2.sites.empty() || !t2.sites.back().self) return std::nullopt;
            const GluingSite& ns = t2.sites.back();
            if (ns.left.block != u - segs[su].first || ns.right.block != v - segs[su].first)
                return std::nullopt;
            auto cusp_ok = [&](const PortRef& oldp, const PortRef& newp) {
                if (!std::holds_alternative<NamedBlock>(g.blocks[oldp.block])) return true;
                int oc = cusp_of_port(std::get<NamedBlock>(g.blocks[oldp.block]), oldp.port);
                int nc = cusp_of_port(std::get<NamedBlock>(c->blocks[newp.block]), newp.port);
                return oc >= 0 && oc == nc;
            };
            if (!cusp_ok(ss.left, ns.left) || !cusp_ok(ss.right, ns.right)) return std::nullopt;
            comps.push_back(std::move(*c));
            joined = su;
        } else {
            auto named2 = [&](int b) {
                return std::holds_alternative<NamedBlock>(g.blocks[b]) && surv_glued[b] >= 2;
            };
            if (named2(u) || named2(v)) return std::nullopt;
            std::optional<GraphManifold> cu, cv;
            if (u == segs[su].second)
                cu = build_segment(segs[su].first, segs[su].second, false);
            else if (u == segs[su].first)
                cu = build_segment(segs[su].first, segs[su].second, true);
            if (v == segs[sv].first)
                cv = build_segment(segs[sv].first, segs[sv].second, false);
            else if (v == segs[sv].second)
                cv = build_segment(segs[sv].first, segs[sv].second, true);
            if (!cu || !cv) return std::nullopt;
            GraphManifold c = std::move(*cu);
            c.junctions.push_back({ss.m});
            for (auto& b : cv->blocks) c.blocks.push_back(std::move(b));
            for (auto& j : cv->junctions) c.junctions.push_back(std::move(j));
            comps.push_back(std::move(c));
            joined = su;
            joined2 = sv;
        }
    }
    for (size_t k = 0; k < segs.size(); ++k) {
        if (static_cast<int>(k) == joined || static_cast<int>(k) == joined2) continue;
        auto c = build_segment(segs[k].first, segs[k].second, false);
        if (!c) return std::nullopt;
        comps.push_back(std::move(*c));
    }

    int E0 = static_cast<int>(t.sites.size());
    int E1 = static_cast<int>(survivors.size());
    int C1 = static_cast<int>(comps.size());
    int loops0 = E0 - V0 + 1;
    int loops1 = E1 - (V0 - 1) + C1;
    int delta = loops0 - loops1;
    if (delta < 0) return std::nullopt;
    for (int j = 0; j < delta; ++j) parts.push_back(make_expr(LensSpace{0, 1}));
    for (auto& c : comps) parts.push_back(make_expr(std::move(c)));
    return parts;
}

// Swallows a one-fiber disc block into its neighbour as a Dehn filling along
// the solid torus meridian; the neighbour's base loses a boundary component.
bool try_absorb(GraphManifold& g) {
    if (g.blocks.size() < 2) return false;
    PortTable t = compute_ports(g);
    for (size_t i = 0; i < g.blocks.size(); ++i) {
        const auto* s = std::get_if<SeifertBlock>(&g.blocks[i]);
        if (!s || !(s->base == kDisc) || s->fibers.size() > 1) continue;
        int si = -1;
        bool left = false;
        for (size_t k = 0; k < t.sites.size(); ++k) {
            if (t.sites[k].left.block == static_cast<int>(i)) {
                si = static_cast<int>(k);
                left = true;
                break;
            }
            if (t.sites[k].right.block == static_cast<int>(i)) {
                si = static_cast<int>(k);
                left = false;
                break;
            }
        }
        if (si < 0 || t.sites[si].self) continue;
        const GluingSite& site = t.sites[si];
        FiberPair f = s->fibers.empty() ? FiberPair{1, 0} : s->fibers[0];
        FiberPair cap = meridian_cap(f, site.m, left);
        int nb = left ? site.right.block : site.left.block;
        int nport = left ? site.right.port : site.left.port;
        if (auto* ns = std::get_if<SeifertBlock>(&g.blocks[nb])) {
            ns->base.boundary -= 1;
            ns->fibers.push_back(cap);
        } else {
            auto& nn = std::get<NamedBlock>(g.blocks[nb]);
            int cusp = cusp_of_port(nn, nport);
            if (cusp < 0) return false;
            nn.fillings[cusp] = make_slope(cap.p, cap.q);
        }
        int j = i == 0 ? 0 : static_cast<int>(i) - 1;
        g.blocks.erase(g.blocks.begin() + i);
        g.junctions.erase(g.junctions.begin() + j);
        return true;
    }
    return false;
}

// ---- canonical form over the residual gauge and the finite move orbit ----

void key_int(std::vector<long long>& k, long long x) {
    k.push_back(x < 0 ? -x : x);
    k.push_back(x < 0 ? 1 : 0);
}

void key_mat(std::vector<long long>& k, const Mat2& m) {
    key_int(k, m.b);
    key_int(k, m.a);
    key_int(k, m.d);
    key_int(k, m.c);
}

std::vector<long long> graph_key(const GraphManifold& g) {
    std::vector<long long> k;
    for (const Block& b : g.blocks) {
        if (const auto* s = std::get_if<SeifertBlock>(&b)) {
            k.push_back(0);
            k.push_back(s->base.orientable ? 0 : 1);
            key_int(k, s->base.genus);
            key_int(k, s->base.boundary);
            key_int(k, static_cast<long long>(s->fibers.size()));
            for (const FiberPair& f : s->fibers) {
                key_int(k, f.p);
                key_int(k, f.q);
            }
        } else {
            const auto& n = std::get<NamedBlock>(b);
            k.push_back(1);
            key_int(k, static_cast<long long>(n.name.size()));
            for (char c : n.name) k.push_back(static_cast<unsigned char>(c));
            key_int(k, static_cast<long long>(n.fillings.size()));
            for (const auto& f : n.fillings) {
                if (!f) {
                    k.push_back(2);
                    continue;
                }
                k.push_back(3);
                key_int(k, f->p);
                key_int(k, f->q);
            }
        }
    }
    for (const auto& stack : g.junctions) {
        key_int(k, static_cast<long long>(stack.size()));
        for (const Mat2& m : stack) key_mat(k, m);
    }
    k.push_back(g.self_gluing ? 1 : 0);
    if (g.self_gluing) key_mat(k, *g.self_gluing);
    return k;
}

struct TwistApp {
    int site;
    bool left;
    int coef;
};

struct GaugeVar {
    std::vector<TwistApp> apps;
};

// Residual section changes once fibers are normalized: a block with a free
// boundary torus twists each of its glued ports independently, a fully glued
// block only in zero-sum combinations. Named blocks pin their frames.
std::vector<GaugeVar> gauge_vars(const GraphManifold& g, const PortTable& t) {
    std::vector<GaugeVar> vars;
    for (size_t i = 0; i < g.blocks.size(); ++i) {
        if (!std::holds_alternative<SeifertBlock>(g.blocks[i])) continue;
        std::vector<std::pair<int, bool>> ports;
        for (size_t k = 0; k < t.sites.size(); ++k) {
            if (t.sites[k].left.block == static_cast<int>(i)) ports.push_back({static_cast<int>(k), true});
            if (t.sites[k].right.block == static_cast<int>(i)) ports.push_back({static_cast<int>(k), false});
        }
        if (ports.empty()) continue;
        if (t.capacity[i] > t.used[i]) {
            for (auto& p : ports) vars.push_back({{{p.first, p.second, 1}}});
        } else {
            for (size_t j = 0; j < ports.size(); ++j)
                for (size_t l = j + 1; l < ports.size(); ++l)
                    vars.push_back({{{ports[l].first, ports[l].second, 1},
                                     {ports[j].first, ports[j].second, -1}}});
        }
    }
    return vars;
}

void apply_gauge(GraphManifold& g, const std::vector<SiteLoc>& locs, const GaugeVar& v,
                 long long amount) {
    for (const TwistApp& a : v.apps) {
        Mat2& m = site_matrix(g, locs[a.site]);
        m = a.left ? col_twist(m, a.coef * amount) : row_twist(m, a.coef * amount);
    }
}

// Entries are at most quadratic in the twist amount; sample at -1,0,1 to
// recover each polynomial and try the integer points near its roots.
bool improve_var(GraphManifold& g, const std::vector<SiteLoc>& locs, const GaugeVar& v,
                 std::vector<long long>& cur_key) {
    std::set<long long> cands = {1, -1};
    GraphManifold g1 = g, gm = g;
    apply_gauge(g1, locs, v, 1);
    apply_gauge(gm, locs, v, -1);
    std::set<int> touched;
    for (const TwistApp& a : v.apps) touched.insert(a.site);
    for (int si : touched) {
        Mat2 m0 = site_matrix(g, locs[si]);
        Mat2 m1 = site_matrix(g1, locs[si]);
        Mat2 mm = site_matrix(gm, locs[si]);
        long long e0[4] = {m0.a, m0.b, m0.c, m0.d};
        long long e1[4] = {m1.a, m1.b, m1.c, m1.d};
        long long em[4] = {mm.a, mm.b, mm.c, mm.d};
        for (int j = 0; j < 4; ++j) {
            long long c = e0[j];
            long long beta = (e1[j] + em[j] - 2 * c) / 2;
            long long alpha = (e1[j] - em[j]) / 2;
            if (beta == 0 && alpha == 0) continue;
            if (beta == 0) {
                long long r = -c / alpha;
                cands.insert(r - 1);
                cands.insert(r);
                cands.insert(r + 1);
            } else {
                double disc = static_cast<double>(alpha) * alpha - 4.0 * beta * c;
                if (disc >= 0) {
                    double sq = std::sqrt(disc);
                    for (double root : {(-alpha + sq) / (2.0 * beta), (-alpha - sq) / (2.0 * beta)}) {
                        cands.insert(static_cast<long long>(std::floor(root)));
                        cands.insert(static_cast<long long>(std::ceil(root)));
                    }
                }
                long long vtx = std::llround(-static_cast<double>(alpha) / (2.0 * beta));
                cands.insert(vtx - 1);
                cands.insert(vtx);
                cands.insert(vtx + 1);
            }
        }
    }
    bool improved = false;
    for (long long amount : cands) {
        if (amount == 0) continue;
        GraphManifold gt = g;
        apply_gauge(gt, locs, v, amount);
        auto kt = graph_key(gt);
        if (kt < cur_key) {
            g = std::move(gt);
            cur_key = std::move(kt);
            improved = true;
        }
    }
    return improved;
}

void gauge_minimize(GraphManifold& g) {
    PortTable t = compute_ports(g);
    if (!t.errors.empty()) return;
    auto locs = site_locations(g);
    auto vars = gauge_vars(g, t);
    if (vars.empty()) return;
    auto key = graph_key(g);
    int guard = 0;
    for (;;) {
        bool any = true;
        while (any && ++guard < 256) {
            any = false;
            for (const GaugeVar& v : vars)
                while (improve_var(g, locs, v, key)) any = true;
        }
        if (guard >= 256) return;
        // single-variable descent can stall when a twist has to be rerouted
        // through two variables whose individual steps both look worse
        bool pair_improved = false;
        for (size_t i = 0; i < vars.size() && !pair_improved; ++i) {
            for (size_t j = 0; j < vars.size() && !pair_improved; ++j) {
                if (i == j) continue;
                for (long long x = -3; x <= 3 && !pair_improved; ++x) {
                    for (long long y = -3; y <= 3; ++y) {
                        if (x == 0 || y == 0) continue;
                        GraphManifold gt = g;
                        apply_gauge(gt, locs, vars[i], x);
                        apply_gauge(gt, locs, vars[j], y);
                        auto kt = graph_key(gt);
                        if (kt < key) {
                            g = std::move(gt);
                            key = std::move(kt);
                            pair_improved = true;
                            break;
                        }
                    }
                }
            }
        }
        if (!pair_improved) return;
    }
}

std::optional<GraphManifold> reversed_chain(const GraphManifold& g) {
    if (g.blocks.size() < 2) return std::nullopt;
    PortTable t = compute_ports(g);
    if (!t.errors.empty()) return std::nullopt;
    if (g.self_gluing) {
        // a self-gluing always binds the first two free ports, so reversing
        // the row rebinds it unless the row has no other free ports left
        int open = 0;
        for (size_t i = 0; i < g.blocks.size(); ++i)
            open += t.capacity[i] - t.used[i];
        if (open > 0) return std::nullopt;
    }
    std::vector<int> glued(g.blocks.size(), 0);
    for (const GluingSite& s : t.sites) {
        ++glued[s.left.block];
        ++glued[s.right.block];
    }
    for (size_t i = 0; i < g.blocks.size(); ++i)
        if (std::holds_alternative<NamedBlock>(g.blocks[i]) && glued[i] >= 2) return std::nullopt;
    GraphManifold r;
    r.blocks.assign(g.blocks.rbegin(), g.blocks.rend());
    for (auto it = g.junctions.rbegin(); it != g.junctions.rend(); ++it) {
        std::vector<Mat2> stack;
        for (const Mat2& m : *it) stack.push_back(m.inverse());
        r.junctions.push_back(std::move(stack));
    }
    if (g.self_gluing) {
        const GluingSite& s = t.sites.back();
        r.self_gluing =
            s.left.block == s.right.block ? *g.self_gluing : g.self_gluing->inverse();
    }
    return r;
}

// The finite orbit a normal form is chosen from: orientation reversal, chain
// reversal, gluing negations, parallel-pair swaps, self-gluing inversion and
// the (D,(2,1),(2,1)) <-> Moebius trades.
std::vector<GraphManifold> variant_orbit(const GraphManifold& g0) {
    std::vector<GraphManifold> cur{g0};

    bool all_seifert = true;
    for (const Block& b : g0.blocks)
        if (!std::holds_alternative<SeifertBlock>(b)) all_seifert = false;
    if (all_seifert) {
        GraphManifold m = g0;
        for (Block& b : m.blocks)
            for (FiberPair& f : std::get<SeifertBlock>(b).fibers) f.q = -f.q;
        for (auto& stack : m.junctions)
            for (Mat2& x : stack) x = mirror_mat(x);
        if (m.self_gluing) *m.self_gluing = mirror_mat(*m.self_gluing);
        while (reduce_fibers_pass(m)) {
        }
        cur.push_back(std::move(m));
    }

    {
        std::vector<GraphManifold> next;
        for (const GraphManifold& g : cur) {
            next.push_back(g);
            if (auto r = reversed_chain(g)) next.push_back(std::move(*r));
        }
        cur = std::move(next);
    }

    {
        std::vector<GraphManifold> next;
        for (const GraphManifold& g : cur) {
            PortTable t = compute_ports(g);
            auto locs = site_locations(g);
            std::vector<int> el;
            for (size_t si = 0; si < t.sites.size(); ++si) {
                if (t.sites[si].self) continue;
                if (site_is_bridge(g, t, static_cast<int>(si))) el.push_back(static_cast<int>(si));
            }
            if (el.size() > 10) el.resize(10);
            for (unsigned mask = 0; mask < (1u << el.size()); ++mask) {
                GraphManifold v = g;
                for (size_t j = 0; j < el.size(); ++j)
                    if (mask & (1u << j)) {
                        Mat2& m = site_matrix(v, locs[el[j]]);
                        m = m.neg();
                    }
                next.push_back(std::move(v));
            }
        }
        cur = std::move(next);
    }

    {
        std::vector<GraphManifold> next;
        for (const GraphManifold& g : cur) {
            std::vector<int> el;
            for (size_t j = 0; j < g.junctions.size(); ++j)
                if (g.junctions[j].size() == 2 &&
                    std::holds_alternative<SeifertBlock>(g.blocks[j]) &&
                    std::holds_alternative<SeifertBlock>(g.blocks[j + 1]))
                    el.push_back(static_cast<int>(j));
            if (el.size() > 6) el.resize(6);
            for (unsigned mask = 0; mask < (1u << el.size()); ++mask) {
                GraphManifold v = g;
                for (size_t j = 0; j < el.size(); ++j)
                    if (mask & (1u << j)) std::swap(v.junctions[el[j]][0], v.junctions[el[j]][1]);
                next.push_back(std::move(v));
            }
        }
        cur = std::move(next);
    }

    {
        std::vector<GraphManifold> next;
        for (const GraphManifold& g : cur) {
            next.push_back(g);
            if (!g.self_gluing) continue;
            PortTable t = compute_ports(g);
            if (t.errors.empty() && !t.sites.empty() && t.sites.back().self) {
                const GluingSite& s = t.sites.back();
                if (s.left.block == s.right.block &&
                    std::holds_alternative<SeifertBlock>(g.blocks[s.left.block])) {
                    GraphManifold v = g;
                    *v.self_gluing = g.self_gluing->inverse();
                    next.push_back(std::move(v));
                }
            }
        }
        cur = std::move(next);
    }

    {
        std::vector<GraphManifold> next;
        for (const GraphManifold& g : cur) {
            if (g.blocks.size() == 1 && !g.self_gluing) {
                next.push_back(g);
                if (exact_d2121(g.blocks[0])) {
                    GraphManifold v = g;
                    v.blocks[0] = SeifertBlock{kMoebius, {}};
                    next.push_back(std::move(v));
                } else if (plain_moebius(g.blocks[0])) {
                    GraphManifold v = g;
                    v.blocks[0] = SeifertBlock{kDisc, {FiberPair{2, 1}, FiberPair{2, 1}}};
                    next.push_back(std::move(v));
                }
                continue;
            }
            struct Slot {
                int site;
                bool left;
            };
            std::vector<Slot> slots;
            PortTable t = compute_ports(g);
            auto locs = site_locations(g);
            for (size_t si = 0; si < t.sites.size(); ++si) {
                if (t.sites[si].self) continue;
                if (exact_d2121(g.blocks[t.sites[si].left.block]) ||
                    plain_moebius(g.blocks[t.sites[si].left.block]))
                    slots.push_back({static_cast<int>(si), true});
                if (exact_d2121(g.blocks[t.sites[si].right.block]) ||
                    plain_moebius(g.blocks[t.sites[si].right.block]))
                    slots.push_back({static_cast<int>(si), false});
            }
            if (slots.size() > 8) slots.resize(8);
            for (unsigned mask = 0; mask < (1u << slots.size()); ++mask) {
                GraphManifold v = g;
                for (size_t j = 0; j < slots.size(); ++j) {
                    if (!(mask & (1u << j))) continue;
                    const Slot& sl = slots[j];
                    int blk = sl.left ? t.sites[sl.site].left.block : t.sites[sl.site].right.block;
                    Mat2& m = site_matrix(v, locs[sl.site]);
                    if (exact_d2121(v.blocks[blk])) {
                        v.blocks[blk] = SeifertBlock{kMoebius, {}};
                        m = sl.left ? trade_left_to_moebius(m) : trade_right_to_moebius(m);
                    } else {
                        v.blocks[blk] = SeifertBlock{kDisc, {FiberPair{2, 1}, FiberPair{2, 1}}};
                        m = sl.left ? trade_left_to_disc(m) : trade_right_to_disc(m);
                    }
                }
                next.push_back(std::move(v));
            }
        }
        cur = std::move(next);
    }

    return cur;
}

GraphManifold select_canonical(GraphManifold g) {
    gauge_minimize(g);
    GraphManifold best = g;
    auto best_key = graph_key(best);
    for (GraphManifold& cand : variant_orbit(g)) {
        gauge_minimize(cand);
        auto k = graph_key(cand);
        if (k < best_key) {
            best = std::move(cand);
            best_key = std::move(k);
        }
    }
    return best;
}

ManifoldExpr normalize_expr(const ManifoldExpr& e);

ManifoldExpr normalize_graph(GraphManifold g) {
    {
        PortTable t = compute_ports(g);
        if (!t.errors.empty())
            throw std::invalid_argument("expression is not well-formed: " + t.errors.front());
    }
    for (;;) {
        if (reduce_fibers_pass(g)) continue;
        if (try_absorb(g)) continue;
        bool split = false;
        for (size_t i = 0; i < g.blocks.size() && !split; ++i) {
            const auto* s = std::get_if<SeifertBlock>(&g.blocks[i]);
            if (!s) continue;
            bool zero = false;
            for (const FiberPair& f : s->fibers)
                if (f.p == 0) zero = true;
            if (!zero) continue;
            auto parts = dissolve_block(g, static_cast<int>(i));
            if (!parts) continue;
            return normalize_expr(combine_parts(std::move(*parts)));
        }
        break;
    }

    if (g.blocks.size() == 1 && !g.self_gluing) {
        if (const auto* s = std::get_if<SeifertBlock>(&g.blocks[0])) {
            if (s->base == kRP2) {
                // with at most one exceptional fiber the block refibers over
                // the sphere: split off the Moebius half as (D,(2,1),(2,1))
                // and cap the rest
                std::vector<FiberPair> ex;
                long long carrier = 0;
                for (const FiberPair& f : s->fibers) {
                    if (f.p == 1)
                        carrier += f.q;
                    else
                        ex.push_back(f);
                }
                if (ex.size() <= 1) {
                    FiberPair f = ex.empty() ? FiberPair{1, carrier}
                                             : FiberPair{ex[0].p, ex[0].q + carrier * ex[0].p};
                    FiberPair cap{f.q, -f.p - f.q};
                    GraphManifold g2;
                    g2.blocks.push_back(
                        SeifertBlock{kS2, {FiberPair{2, 1}, FiberPair{2, 1}, cap}});
                    return normalize_graph(std::move(g2));
                }
            }
            if (s->base == kS2) {
                std::vector<FiberPair> ex;
                long long carrier = 0;
                for (const FiberPair& f : s->fibers) {
                    if (f.p == 1)
                        carrier += f.q;
                    else
                        ex.push_back(f);
                }
                if (ex.size() <= 2) {
                    FiberPair f1 = ex.size() >= 1 ? ex[0] : FiberPair{1, 0};
                    FiberPair f2 = ex.size() >= 2 ? ex[1] : FiberPair{1, 0};
                    f2.q += carrier * f2.p;
                    return make_expr(lens_of_two_fibers(f1, f2));
                }
            } else if (s->base == kDisc && s->fibers.size() <= 1) {
                g.blocks[0] = SeifertBlock{kDisc, {}};
            }
        }
    }

    return make_expr(select_canonical(std::move(g)));
}

bool is_s3(const ManifoldExpr& e) {
    const auto* l = std::get_if<LensSpace>(&e.v);
    return l && (l->p == 1 || l->p == -1);
}

void flatten_sum(ManifoldExpr n, std::vector<ManifoldExpr>& out) {
    if (auto* s = std::get_if<ConnectedSum>(&n.v)) {
        for (ManifoldExpr& p : s->parts) flatten_sum(std::move(p), out);
        return;
    }
    out.push_back(std::move(n));
}

ManifoldExpr normalize_expr(const ManifoldExpr& e) {
    if (const auto* l = std::get_if<LensSpace>(&e.v)) return make_expr(canonical_lens(l->p, l->q));
    if (std::holds_alternative<TorusBundle>(e.v)) return e;
    if (const auto* s = std::get_if<ConnectedSum>(&e.v)) {
        std::vector<ManifoldExpr> acc;
        for (const ManifoldExpr& p : s->parts) flatten_sum(normalize_expr(p), acc);
        std::vector<ManifoldExpr> keep;
        for (ManifoldExpr& p : acc)
            if (!is_s3(p)) keep.push_back(std::move(p));
        if (keep.empty()) return make_expr(LensSpace{1, 0});
        if (keep.size() == 1) return std::move(keep[0]);
        std::vector<std::pair<std::string, size_t>> order;
        for (size_t i = 0; i < keep.size(); ++i) order.emplace_back(print_expr(keep[i]), i);
        std::sort(order.begin(), order.end());
        ConnectedSum cs;
        for (auto& [text, idx] : order) cs.parts.push_back(std::move(keep[idx]));
        return make_expr(std::move(cs));
    }
    return normalize_graph(std::get<GraphManifold>(e.v));
}

}  // namespace

ManifoldExpr apply_move(const ManifoldExpr& e, const MoveId& mv) {
    const auto* gp = std::get_if<GraphManifold>(&e.v);
    if (!gp) bad("move (" + std::to_string(mv.id) + ") needs a graph-manifold expression");
    GraphManifold g = *gp;
    PortTable t = compute_ports(g);
    if (!t.errors.empty()) bad("malformed expression: " + t.errors.front());
    auto locs = site_locations(g);

    auto seifert_at = [&](int b, const char* what) -> SeifertBlock& {
        if (b < 0 || b >= static_cast<int>(g.blocks.size()))
            bad(std::string(what) + ": block index out of range");
        auto* s = std::get_if<SeifertBlock>(&g.blocks[b]);
        if (!s) bad(std::string(what) + ": block " + std::to_string(b) + " is not a Seifert block");
        return *s;
    };
    auto site_at = [&](int si, const char* what) -> const GluingSite& {
        if (si < 0 || si >= static_cast<int>(t.sites.size()))
            bad(std::string(what) + ": gluing index out of range");
        return t.sites[si];
    };
    auto fiber_at = [&](SeifertBlock& s, int f, const char* what) -> FiberPair& {
        if (f < 0 || f >= static_cast<int>(s.fibers.size()))
            bad(std::string(what) + ": fiber index out of range");
        return s.fibers[f];
    };

    switch (mv.id) {
        case 1: {
            for (const Block& b : g.blocks)
                if (!std::holds_alternative<SeifertBlock>(b))
                    bad("move (1): named blocks carry a fixed peripheral frame; the row must be all Seifert");
            for (Block& b : g.blocks)
                for (FiberPair& f : std::get<SeifertBlock>(b).fibers) f.q = -f.q;
            for (auto& stack : g.junctions)
                for (Mat2& m : stack) m = mirror_mat(m);
            if (g.self_gluing) *g.self_gluing = mirror_mat(*g.self_gluing);
            break;
        }
        case 2: {
            SeifertBlock& s = seifert_at(mv.block, "move (2)");
            if (mv.fiber == mv.fiber2) bad("move (2): needs two distinct fibers");
            FiberPair& f1 = fiber_at(s, mv.fiber, "move (2)");
            FiberPair& f2 = fiber_at(s, mv.fiber2, "move (2)");
            f1.q += mv.k * f1.p;
            f2.q -= mv.k * f2.p;
            break;
        }
        case 3: {
            SeifertBlock& s = seifert_at(mv.block, "move (3)");
            if (s.base.boundary == 0) bad("move (3): block has no boundary");
            if (t.capacity[mv.block] <= t.used[mv.block])
                bad("move (3): every boundary torus of the block is glued; the twist has nowhere to go");
            FiberPair& f = fiber_at(s, mv.fiber, "move (3)");
            f.q += mv.k * f.p;
            break;
        }
        case 4: {
            SeifertBlock& s = seifert_at(mv.block, "move (4)");
            if (mv.add) {
                int pos = mv.fiber >= 0 && mv.fiber <= static_cast<int>(s.fibers.size())
                              ? mv.fiber
                              : static_cast<int>(s.fibers.size());
                s.fibers.insert(s.fibers.begin() + pos, FiberPair{1, 0});
            } else {
                FiberPair& f = fiber_at(s, mv.fiber, "move (4)");
                if (!(f == FiberPair{1, 0})) bad("move (4): fiber is not (1,0)");
                s.fibers.erase(s.fibers.begin() + mv.fiber);
            }
            break;
        }
        case 5: {
            const GluingSite& s = site_at(mv.gluing, "move (5)");
            if (s.self)
                bad("move (5) applies only to a gluing between two distinct blocks, not the "
                    "self-gluing");
            if (!site_is_bridge(g, t, mv.gluing))
                bad("move (5): the gluing torus must separate the expression");
            Mat2& m = site_matrix(g, locs[mv.gluing]);
            m = m.neg();
            break;
        }
        case 6: {
            const GluingSite& s = site_at(mv.gluing, "move (6)");
            SeifertBlock& b = seifert_at(s.left.block, "move (6)");
            FiberPair& f = fiber_at(b, mv.fiber, "move (6)");
            f.q += mv.k * f.p;
            Mat2& m = site_matrix(g, locs[mv.gluing]);
            m = col_twist(m, mv.k);
            break;
        }
        case 7: {
            const GluingSite& s = site_at(mv.gluing, "move (7)");
            SeifertBlock& b = seifert_at(s.right.block, "move (7)");
            FiberPair& f = fiber_at(b, mv.fiber, "move (7)");
            f.q += mv.k * f.p;
            Mat2& m = site_matrix(g, locs[mv.gluing]);
            m = row_twist(m, mv.k);
            break;
        }
        case 8: {
            const GluingSite& s = site_at(mv.gluing, "move (8)");
            Mat2& m = site_matrix(g, locs[mv.gluing]);
            if (!mv.add) {
                if (!exact_d2121(g.blocks[s.left.block]))
                    bad("move (8): left block must be exactly (D,(2,1),(2,1))");
                g.blocks[s.left.block] = SeifertBlock{kMoebius, {}};
                m = trade_left_to_moebius(m);
            } else {
                if (!plain_moebius(g.blocks[s.left.block]))
                    bad("move (8): left block must be the bare Moebius circle bundle");
                g.blocks[s.left.block] = SeifertBlock{kDisc, {FiberPair{2, 1}, FiberPair{2, 1}}};
                m = trade_left_to_disc(m);
            }
            break;
        }
        case 9: {
            const GluingSite& s = site_at(mv.gluing, "move (9)");
            Mat2& m = site_matrix(g, locs[mv.gluing]);
            if (!mv.add) {
                if (!exact_d2121(g.blocks[s.right.block]))
                    bad("move (9): right block must be exactly (D,(2,1),(2,1))");
                g.blocks[s.right.block] = SeifertBlock{kMoebius, {}};
                m = trade_right_to_moebius(m);
            } else {
                if (!plain_moebius(g.blocks[s.right.block]))
                    bad("move (9): right block must be the bare Moebius circle bundle");
                g.blocks[s.right.block] = SeifertBlock{kDisc, {FiberPair{2, 1}, FiberPair{2, 1}}};
                m = trade_right_to_disc(m);
            }
            break;
        }
        case 10: {
            if (g.blocks.size() != 1 || g.self_gluing)
                bad("move (10): applies to a standalone block");
            SeifertBlock& s = seifert_at(0, "move (10)");
            if (!s.base.orientable) bad("move (10): base must be orientable");
            FiberPair& f = fiber_at(s, mv.fiber, "move (10)");
            if (f.p != 0 || (f.q != 1 && f.q != -1)) bad("move (10): fiber is not (0,1)");
            auto parts = dissolve_block(g, 0);
            if (!parts) bad("move (10): block does not split");
            return combine_parts(std::move(*parts));
        }
        case 11: {
            const GluingSite& s = site_at(mv.gluing, "move (11)");
            if (mv.block != s.left.block && mv.block != s.right.block)
                bad("move (11): block is not a side of the gluing");
            const auto* d = std::get_if<SeifertBlock>(&g.blocks[mv.block]);
            if (!d || !(d->base == kDisc) || d->fibers.size() != 2)
                bad("move (11): dying block must be (D,(0,1),(a,b))");
            bool has_zero = false;
            for (const FiberPair& f : d->fibers)
                if (f.p == 0 && (f.q == 1 || f.q == -1)) has_zero = true;
            if (!has_zero) bad("move (11): dying block must carry a (0,1) fiber");
            auto parts = dissolve_block(g, mv.block);
            if (!parts) bad("move (11): row does not survive the split");
            return combine_parts(std::move(*parts));
        }
        default:
            bad("unknown move id " + std::to_string(mv.id));
    }
    return make_expr(std::move(g));
}

long long fiber_intersection(const Mat2& m) { return m.b < 0 ? -m.b : m.b; }

long long fiber_intersection(const GraphManifold& g, int site) {
    PortTable t = compute_ports(g);
    if (site < 0 || site >= static_cast<int>(t.sites.size()))
        throw std::invalid_argument("gluing index out of range");
    const GluingSite& s = t.sites[site];
    if (!std::holds_alternative<SeifertBlock>(g.blocks[s.left.block]) ||
        !std::holds_alternative<SeifertBlock>(g.blocks[s.right.block]))
        throw std::invalid_argument("fiber intersection needs Seifert blocks on both sides");
    return fiber_intersection(s.m);
}

ManifoldExpr normalize(const ManifoldExpr& e) { return normalize_expr(e); }

EquivResult equivalent(const ManifoldExpr& e1, const ManifoldExpr& e2) {
    ManifoldExpr n1 = normalize(e1);
    ManifoldExpr n2 = normalize(e2);
    AbelianGroup a1 = h1(n1), a2 = h1(n2);
    if (!abelian_iso(a1, a2)) return {Tri::no, "h1 differs: " + a1.str() + " vs " + a2.str()};
    int b1 = free_boundary_count(n1), b2 = free_boundary_count(n2);
    if (b1 != b2)
        return {Tri::no, "boundary torus count differs: " + std::to_string(b1) + " vs " +
                             std::to_string(b2)};
    std::string p1 = print_expr(n1), p2 = print_expr(n2);
    if (p1 == p2) return {Tri::yes, "normal forms coincide: " + p1};

    if (std::holds_alternative<LensSpace>(n1.v) && std::holds_alternative<LensSpace>(n2.v))
        return {Tri::no, "lens invariants differ: " + p1 + " vs " + p2};

    const auto* t1 = std::get_if<TorusBundle>(&n1.v);
    const auto* t2 = std::get_if<TorusBundle>(&n2.v);
    if (t1 && t2) {
        ConjugacyResult c1 = gl2_conjugate(t1->monodromy, t2->monodromy, 14);
        if (c1.verdict == Tri::yes) return {Tri::yes, "monodromies conjugate in GL(2,Z)"};
        ConjugacyResult c2 = gl2_conjugate(t1->monodromy, t2->monodromy.inverse(), 14);
        if (c2.verdict == Tri::yes) return {Tri::yes, "monodromies conjugate up to inversion"};
        if (c1.verdict == Tri::no && c2.verdict == Tri::no) {
            std::string why = c1.obstruction.empty() ? c2.obstruction : c1.obstruction;
            return {Tri::no, "torus bundle monodromy invariant differs: " + why};
        }
        return {Tri::unknown, "monodromy conjugacy search exhausted the word bound"};
    }
    return {Tri::unknown, "no decision procedure for these normal forms"};
}

}  // namespace chainfill
