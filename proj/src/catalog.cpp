#include "chainfill/catalog.hpp"

#include "chainfill/chains.hpp"
#include "chainfill/homology.hpp"
#include "chainfill/moves.hpp"
#include "chainfill/notation.hpp"

#include <numeric>
#include <stdexcept>

namespace chainfill {

RowReport verify_row(const CatalogRow& row) {
    RowReport r;
    r.row = row;
    try {
        r.listed = parse_group(row.h1);
        r.from_expr = h1(parse_expr(row.expr));
        r.from_filling = h1_filled(row.family, parse_filling(row.family, row.slopes));
        r.pass = abelian_iso(r.from_expr, r.listed) && abelian_iso(r.from_filling, r.listed);
        if (!r.pass)
            r.error = "groups differ: expr " + r.from_expr.str() + ", filling " +
                      r.from_filling.str() + ", listed " + r.listed.str();
    } catch (const std::exception& e) {
        r.pass = false;
        r.error = e.what();
    }
    return r;
}

std::vector<RowReport> verify_catalog(std::optional<int> table) {
    std::vector<RowReport> out;
    for (const CatalogRow& row : Registry::instance().catalog()) {
        if (table && row.table != *table) continue;
        out.push_back(verify_row(row));
    }
    return out;
}

namespace {

void require(bool ok, const std::string& what) {
    if (!ok) throw std::invalid_argument(what);
}

void require_coprime(long long p, long long q) {
    require(std::gcd(p < 0 ? -p : p, q < 0 ? -q : q) == 1,
            "pair (" + std::to_string(p) + "," + std::to_string(q) + ") is not coprime");
}

void require_arity(const std::vector<long long>& v, size_t n, const std::string& id) {
    require(v.size() == n,
            id + " takes " + std::to_string(n) + " parameters, got " +
                std::to_string(v.size()));
}

SeifertBlock disc2(long long a, long long b, long long c, long long d) {
    require_coprime(a, b);
    require_coprime(c, d);
    return SeifertBlock{kDisc, {{a, b}, {c, d}}};
}

SeifertBlock annulus1(long long a, long long b) {
    require_coprime(a, b);
    return SeifertBlock{kAnnulus, {{a, b}}};
}

ManifoldExpr chain_of(std::vector<SeifertBlock> blocks, std::vector<Mat2> ms) {
    GraphManifold g;
    for (SeifertBlock& b : blocks) g.blocks.push_back(std::move(b));
    for (const Mat2& m : ms) g.junctions.push_back({m});
    return make_expr(std::move(g));
}

ManifoldExpr self_glued(SeifertBlock b, Mat2 m) {
    GraphManifold g;
    g.blocks.push_back(std::move(b));
    g.self_gluing = m;
    return make_expr(std::move(g));
}

ManifoldExpr double_glued(SeifertBlock l, SeifertBlock r) {
    GraphManifold g;
    g.blocks.push_back(std::move(l));
    g.blocks.push_back(std::move(r));
    g.junctions.push_back({Mat2{0, 1, 1, 0}, Mat2{0, 1, 1, 0}});
    return make_expr(std::move(g));
}

ManifoldExpr named_union(const std::string& name, std::vector<std::optional<Slope>> fills,
                         Mat2 m, SeifertBlock right) {
    GraphManifold g;
    g.blocks.push_back(NamedBlock{name, std::move(fills)});
    g.blocks.push_back(std::move(right));
    g.junctions.push_back({m});
    return make_expr(std::move(g));
}

const Mat2 kSwap{0, 1, 1, 0};

}  // namespace

ManifoldExpr generate_family(const std::string& id, const std::vector<long long>& p) {
    if (id == "Thm2.4-F1") {
        require_arity(p, 8, id);
        return chain_of({disc2(p[0], p[1], p[2], p[3]), disc2(p[4], p[5], p[6], p[7])},
                        {kSwap});
    }
    if (id == "Thm2.4-F2") {
        require_arity(p, 1, id);
        long long n = p[0];
        require(n >= 0 && n <= 3, id + ": n must lie in 0..3");
        return chain_of({disc2(2, 1, 2, 1), disc2(2, 1, 3, 1)},
                        {Mat2{1 + n, 2 + n, -n, -1 - n}});
    }
    if (id == "Thm2.4-F3") {
        require_arity(p, 2, id);
        return self_glued(annulus1(p[0], p[1]), kSwap);
    }
    if (id == "Thm2.4-F4") {
        require_arity(p, 0, id);
        return self_glued(annulus1(2, 1), Mat2{1, 2, 0, -1});
    }
    if (id == "Thm2.7-F1") {
        require_arity(p, 10, id);
        return chain_of({disc2(p[0], p[1], p[2], p[3]), annulus1(p[4], p[5]),
                         disc2(p[6], p[7], p[8], p[9])},
                        {kSwap, kSwap});
    }
    if (id == "Thm2.7-F2" || id == "Thm2.11-F2") {
        require_arity(p, 4, id);
        return double_glued(annulus1(p[0], p[1]), annulus1(p[2], p[3]));
    }
    if (id == "Thm2.7-F3") {
        require_arity(p, 0, id);
        return named_union("M1", {std::nullopt}, Mat2{-1, 0, 1, 1}, disc2(2, 1, 2, 1));
    }
    if (id == "Thm2.7-F4") {
        require_arity(p, 0, id);
        return named_union("M1", {std::nullopt}, Mat2{-1, 1, 1, 0}, disc2(2, 1, 2, 1));
    }
    if (id == "Thm2.11-F1") {
        require_arity(p, 12, id);
        return chain_of({disc2(p[0], p[1], p[2], p[3]), annulus1(p[4], p[5]),
                         annulus1(p[6], p[7]), disc2(p[8], p[9], p[10], p[11])},
                        {kSwap, kSwap, kSwap});
    }
    if (id == "Thm2.11-F3") {
        require_arity(p, 12, id);
        require(p[8] <= -2 || p[8] >= 2, id + ": |i| must be at least 2");
        require(p[10] <= -2 || p[10] >= 2, id + ": |k| must be at least 2");
        std::vector<std::optional<Slope>> fills;
        for (int i = 0; i < 4; ++i) {
            require_coprime(p[2 * i], p[2 * i + 1]);
            fills.push_back(make_slope(p[2 * i], p[2 * i + 1]));
        }
        fills.push_back(std::nullopt);
        return named_union("M5", std::move(fills), kSwap, disc2(p[8], p[9], p[10], p[11]));
    }
    if (id == "Thm2.11-F4") {
        require_arity(p, 2, id);
        require_coprime(p[0], p[1]);
        return named_union("M2", {make_slope(p[0], p[1]), std::nullopt}, Mat2{-1, 0, 1, 1},
                           disc2(2, 1, 2, 1));
    }
    if (id == "Thm2.11-F5") {
        require_arity(p, 1, id);
        long long n = p[0];
        require(n >= 3 && n <= 6, id + ": n must lie in 3..6");
        return self_glued(annulus1(2, 1), Mat2{n - 1, n, 1, 1});
    }
    if (id == "Tbl25") {
        require_arity(p, 1, id);
        std::vector<CatalogRow> rows;
        for (const CatalogRow& r : Registry::instance().catalog())
            if (r.table == 25) rows.push_back(r);
        require(p[0] >= 0 && p[0] < static_cast<long long>(rows.size()),
                id + ": row index out of range");
        return parse_expr(rows[p[0]].expr);
    }
    throw std::invalid_argument("unknown family id " + id);
}

std::vector<std::string> family_spec_ids() {
    return {"Thm2.4-F1",  "Thm2.4-F2",  "Thm2.4-F3",  "Thm2.4-F4", "Thm2.7-F1",
            "Thm2.7-F2",  "Thm2.7-F3",  "Thm2.7-F4",  "Thm2.11-F1", "Thm2.11-F2",
            "Thm2.11-F3", "Thm2.11-F4", "Thm2.11-F5", "Tbl25"};
}

namespace {

struct Pair {
    long long p, q;
};

// sign-normalize so the first coordinate is non-negative
Pair norm_pair(long long p, long long q) {
    require_coprime(p, q);
    if (p < 0) return {-p, -q};
    return {p, q};
}

bool is_lens(const ManifoldExpr& e) { return std::holds_alternative<LensSpace>(e.v); }

bool has_non_lens_part(const ManifoldExpr& e) {
    if (const auto* cs = std::get_if<ConnectedSum>(&e.v)) {
        for (const ManifoldExpr& part : cs->parts)
            if (!is_lens(part)) return true;
        return false;
    }
    return !is_lens(e);
}

// a closed one-block Seifert manifold over S2 with exactly three
// exceptional fibres (integer carriers allowed)
bool closed_s2_three_fibers(const ManifoldExpr& e) {
    const auto* g = std::get_if<GraphManifold>(&e.v);
    if (!g || g->blocks.size() != 1 || g->self_gluing || !g->junctions.empty())
        return false;
    const auto* s = std::get_if<SeifertBlock>(&g->blocks[0]);
    if (!s || s->base != kS2) return false;
    int exceptional = 0;
    for (const FiberPair& f : s->fibers) {
        long long a = f.p < 0 ? -f.p : f.p;
        if (a == 0) return false;
        if (a >= 2) ++exceptional;
    }
    return exceptional == 3;
}

ManifoldExpr klein_block(long long p, long long q) {
    return make_expr(GraphManifold{{SeifertBlock{kKlein, {{p, q}}}}, {}, {}});
}

}  // namespace

CaseResult classify_two_block(long long a0, long long b0, long long c0, long long d0,
                              long long e0, long long f0, long long g0, long long h0) {
    Pair A = norm_pair(a0, b0), C = norm_pair(c0, d0);
    Pair E = norm_pair(e0, f0), G = norm_pair(g0, h0);
    ManifoldExpr raw = chain_of({SeifertBlock{kDisc, {{A.p, A.q}, {C.p, C.q}}},
                                 SeifertBlock{kDisc, {{E.p, E.q}, {G.p, G.q}}}},
                                {kSwap});

    if (A.p == 0 || C.p == 0 || E.p == 0 || G.p == 0)
        return {1, normalize(raw)};
    if (A.p == 1 || C.p == 1 || E.p == 1 || G.p == 1) {
        ManifoldExpr nf = normalize(raw);
        return {closed_s2_three_fibers(nf) ? 2 : 1, std::move(nf)};
    }

    bool left22 = A.p == 2 && C.p == 2;
    bool right22 = E.p == 2 && G.p == 2;
    long long k = left22 ? -(A.q + C.q - 2) / 2 : 0;
    long long l = right22 ? (E.q + G.q - 2) / 2 : 0;
    if (left22 && right22 && ((k == 0 && l == 0) || (k == 2 && l == -2)))
        return {4, klein_block(1, 1)};
    if (left22 && k == 1)
        return {3, make_expr(GraphManifold{
                       {SeifertBlock{kRP2, {{E.p, E.q}, {G.p, G.q}}}}, {}, {}})};
    if (right22 && l == -1)
        return {3, make_expr(GraphManifold{
                       {SeifertBlock{kRP2, {{A.p, A.q}, {C.p, C.q}}}}, {}, {}})};
    return {5, std::move(raw)};
}

CaseResult classify_self_glue(long long a0, long long b0) {
    Pair A = norm_pair(a0, b0);
    if (A.p == 0) return {1, make_expr(LensSpace{0, 1})};
    if (A.p == 1) return {2, make_expr(TorusBundle{Mat2{A.q, 1, -1, 0}})};
    return {3, self_glued(SeifertBlock{kAnnulus, {{A.p, A.q}}}, kSwap)};
}

CaseResult classify_three_block(const std::array<long long, 10>& in) {
    Pair A = norm_pair(in[0], in[1]), C = norm_pair(in[2], in[3]);
    Pair E = norm_pair(in[4], in[5]);
    Pair G = norm_pair(in[6], in[7]), I = norm_pair(in[8], in[9]);
    ManifoldExpr raw = chain_of({SeifertBlock{kDisc, {{A.p, A.q}, {C.p, C.q}}},
                                 SeifertBlock{kAnnulus, {{E.p, E.q}}},
                                 SeifertBlock{kDisc, {{G.p, G.q}, {I.p, I.q}}}},
                                {kSwap, kSwap});

    if (A.p == 0 || C.p == 0 || E.p == 0 || G.p == 0 || I.p == 0) {
        ManifoldExpr nf = normalize(raw);
        return {has_non_lens_part(nf) ? 3 : 2, std::move(nf)};
    }
    if (A.p == 1 || C.p == 1 || G.p == 1 || I.p == 1) return {1, normalize(raw)};
    if (E.p == 1) {
        if (E.q == 0)
            return {4, make_expr(GraphManifold{
                           {SeifertBlock{
                               kS2, {{A.p, A.q}, {C.p, C.q}, {G.p, G.q}, {I.p, I.q}}}},
                           {},
                           {}})};
        if (E.q == 1 || E.q == -1) return {1, normalize(raw)};
        return {6, normalize(raw)};
    }

    bool left_match = A.p == 2 && C.p == 2 && A.q + C.q == 0;
    bool right_match = G.p == 2 && I.p == 2 && G.q + I.q == 0;
    if (left_match && right_match) return {5, klein_block(E.p, E.q)};
    if (left_match || right_match) {
        Pair far1 = left_match ? G : A;
        Pair far2 = left_match ? I : C;
        GraphManifold g;
        g.blocks.push_back(SeifertBlock{kMoebius, {{E.p, E.q}}});
        g.blocks.push_back(SeifertBlock{kDisc, {{far1.p, far1.q}, {far2.p, far2.q}}});
        g.junctions.push_back({kSwap});
        return {7, make_expr(std::move(g))};
    }
    return {8, std::move(raw)};
}

CaseResult classify_double_annulus(long long a0, long long b0, long long c0,
                                   long long d0) {
    Pair A = norm_pair(a0, b0), C = norm_pair(c0, d0);
    if (A.p == 0 || C.p == 0) {
        Pair other = A.p == 0 ? C : A;
        ConnectedSum cs;
        cs.parts.push_back(make_expr(LensSpace{0, 1}));
        cs.parts.push_back(make_expr(LensSpace{other.q, other.p}));
        return {1, make_expr(std::move(cs))};
    }
    if (A.p == 1 && C.p == 1) {
        long long b = A.q, d = C.q;
        return {2, make_expr(TorusBundle{Mat2{d * b - 1, -d, b, -1}})};
    }
    if (A.p == 1 || C.p == 1) {
        Pair keep = A.p == 1 ? C : A;
        long long twist = A.p == 1 ? A.q : C.q;
        return {3, self_glued(SeifertBlock{kAnnulus, {{keep.p, keep.q}}},
                              Mat2{1, twist, 0, -1})};
    }
    return {4, double_glued(SeifertBlock{kAnnulus, {{A.p, A.q}}},
                            SeifertBlock{kAnnulus, {{C.p, C.q}}})};
}

bool thm27_matrix_reachable(const Mat2& B) {
    if (B.det() != -1) throw std::invalid_argument("matrix must have determinant -1");
    for (const Mat2& m : {B, B.neg()}) {
        long long f = m.b;
        if (f == 0) {
            if (m.a == 1 && m.d == -1) return true;
        } else {
            if ((m.a - 1) % f == 0 && (m.d + 1) % f == 0) return true;
        }
    }
    return false;
}

FlatReport flat_reachability(long long bound) {
    FlatReport rep;
    rep.bound = bound;
    std::vector<char> shear(static_cast<size_t>(2 * bound + 1), 0);
    bool minus_id = false, order3 = false, order4 = false, order6 = false;
    for (long long m = -bound; m <= bound; ++m)
        for (long long n = -bound; n <= bound; ++n)
            for (long long f = -bound; f <= bound; ++f) {
                Mat2 c{-(1 + m * f), -f, -m - n - m * n * f, -(1 + n * f)};
                if (c.a == 1 && c.b == 0 && c.c == 0 && c.d == 1)
                    rep.identity_found = true;
                if (c.a == -1 && c.b == 0 && c.d == -1 && c.c >= -bound && c.c <= bound)
                    shear[static_cast<size_t>(c.c + bound)] = 1;
                long long tr = c.a + c.d;
                if (tr == -2 && c.b == 0 && c.c == 0) minus_id = true;
                if (tr == -1) order3 = true;
                if (tr == 0) order4 = true;
                if (tr == 1) order6 = true;
            }
    for (long long a = -bound; a <= bound; ++a)
        if (!shear[static_cast<size_t>(a + bound)]) rep.missing_shears.push_back(a);
    rep.finite_order_bundles_found =
        int(minus_id) + int(order3) + int(order4) + int(order6);

    CaseResult four = classify_three_block({2, 1, 2, 1, 1, 0, 2, 1, 2, -3});
    ManifoldExpr chain = chain_of({disc2(2, 1, 2, 1), annulus1(1, 0), disc2(2, 1, 2, -3)},
                                  {kSwap, kSwap});
    AbelianGroup expect = make_group(1, {2, 2});
    rep.four_fiber_flat_found = four.label == 4 && abelian_iso(h1(four.form), expect) &&
                                abelian_iso(h1(chain), expect);
    return rep;
}

bool three_torus_unreachable(long long bound) {
    return !flat_reachability(bound).identity_found;
}

}  // namespace chainfill
