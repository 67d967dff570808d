#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "chainfill/homology.hpp"
#include "chainfill/moves.hpp"
#include "chainfill/notation.hpp"
#include "drawmove.hpp"

#include <stdexcept>
#include <string>

using namespace chainfill;
using namespace chainfill::testgen;

TEST_CASE("normalization pins") {
    CHECK(print_expr(normalize(parse_expr("SFS(D;(2,1),(2,-1))"))) == "SFS(D;(2,1),(2,1))");
    CHECK(print_expr(normalize(parse_expr("SFS(S2;(2,1),(3,1),(0,1))"))) == "L(2,1) # L(3,1)");
}

TEST_CASE("equivalence pins") {
    auto eq = equivalent(parse_expr("SFS(D;(2,1),(2,1))"), parse_expr("MbxS1"));
    CHECK(eq.verdict == Tri::yes);
    auto eq2 = equivalent(parse_expr("L(7,1)"), parse_expr("L(7,2)"));
    CHECK(eq2.verdict == Tri::no);
    auto eq3 = equivalent(parse_expr("L(5,2)"), parse_expr("L(5,3)"));
    CHECK(eq3.verdict == Tri::yes);
}

TEST_CASE("fiber intersection number") {
    CHECK(fiber_intersection(Mat2{0, 1, 1, 0}) == 1);
    CHECK(fiber_intersection(Mat2{4, 5, -3, -4}) == 5);
    CHECK(fiber_intersection(Mat2{1, 0, 2, 1}) == 0);
    CHECK(fiber_intersection(Mat2{1, -1, 0, -1}) == 1);
}

TEST_CASE("move 5 rejections") {
    GraphManifold g;
    g.blocks.push_back(SeifertBlock{kAnnulus, {FiberPair{2, 1}}});
    g.self_gluing = Mat2{0, 1, 1, 0};
    CHECK_THROWS_AS(apply_move(make_expr(g), MoveId{.id = 5, .gluing = 0}),
                    std::invalid_argument);
    auto par = parse_expr("AxS1=[0,1;1,0][0,1;1,0]=AxS1");
    CHECK_THROWS_AS(apply_move(par, MoveId{.id = 5, .gluing = 0}), std::invalid_argument);
}

TEST_CASE("move 10 splits off a lens sum") {
    auto m10 = apply_move(parse_expr("SFS(S2;(3,2),(5,3),(0,1))"),
                          MoveId{.id = 10, .block = 0, .fiber = 2});
    CHECK(print_expr(m10) == "L(3,2) # L(5,3)");
}

TEST_CASE("move 8 absorbs an end block into a Moebius piece") {
    auto m8 = apply_move(parse_expr("SFS(D;(2,1),(2,1))=[1,2;0,-1]=SFS(D;(3,1))"),
                         MoveId{.id = 8, .gluing = 0});
    CHECK(print_expr(m8) == "MbxS1=[2,1;-1,-1]=SFS(D;(3,1))");
}

TEST_CASE("each move preserves first homology and boundary count") {
    const int N = 300;
    Rng rng(20260815);
    for (int id = 1; id <= 11; ++id) {
        CAPTURE(id);
        int done = 0, tries = 0;
        while (done < N && tries < N * 60) {
            ++tries;
            auto dm = draw_move(rng, id);
            if (!dm) continue;
            ManifoldExpr e2;
            try {
                e2 = apply_move(dm->first, dm->second);
            } catch (const std::exception& ex) {
                CAPTURE(print_expr(dm->first));
                FAIL_CHECK("apply_move threw: " << ex.what());
                continue;
            }
            AbelianGroup h0 = h1(dm->first), hh = h1(e2);
            if (!abelian_iso(h0, hh)) {
                CAPTURE(print_expr(dm->first));
                CAPTURE(print_expr(e2));
                FAIL_CHECK("h1 changed: " << h0.str() << " -> " << hh.str());
            }
            CHECK(free_boundary_count(dm->first) == free_boundary_count(e2));
            if (id == 4) {
                ManifoldExpr e3 = apply_move(e2, MoveId{.id = 4,
                                                        .block = dm->second.block,
                                                        .fiber = dm->second.fiber,
                                                        .add = false});
                CHECK(print_expr(e3) == print_expr(dm->first));
            }
            if (id == 8 || id == 9) {
                ManifoldExpr e3 = apply_move(
                    e2, MoveId{.id = id, .gluing = dm->second.gluing, .add = !dm->second.add});
                CHECK(print_expr(e3) == print_expr(dm->first));
            }
            ++done;
        }
        CHECK(done == N);
    }
}

TEST_CASE("moves 5-7 keep the fiber intersection number at the moved site") {
    Rng rng(77);
    for (int id : {5, 6, 7}) {
        CAPTURE(id);
        int done = 0, tries = 0;
        while (done < 200 && tries < 200 * 60) {
            ++tries;
            auto dm = draw_move(rng, id);
            if (!dm) continue;
            const auto* g0 = std::get_if<GraphManifold>(&dm->first.v);
            if (!g0) continue;
            long long fi0 = fiber_intersection(*g0, dm->second.gluing);
            ManifoldExpr e2;
            try {
                e2 = apply_move(dm->first, dm->second);
            } catch (const std::exception&) {
                continue;
            }
            const auto* g2 = std::get_if<GraphManifold>(&e2.v);
            REQUIRE(g2 != nullptr);
            CHECK(fiber_intersection(*g2, dm->second.gluing) == fi0);
            ++done;
        }
        CHECK(done == 200);
    }
}

TEST_CASE("normalize preserves h1 and boundary and is idempotent") {
    GenOptions o;
    o.allow_named = true;
    o.allow_self = true;
    o.allow_zero_fiber = true;
    Rng rng(31);
    for (int i = 0; i < 300; ++i) {
        GraphManifold g = random_chain(rng, o);
        ManifoldExpr e = make_expr(g);
        ManifoldExpr n;
        try {
            n = normalize(e);
        } catch (const std::exception& ex) {
            CAPTURE(print_expr(e));
            FAIL_CHECK("normalize threw: " << ex.what());
            continue;
        }
        AbelianGroup h0 = h1(e), hn = h1(n);
        if (!abelian_iso(h0, hn)) {
            CAPTURE(print_expr(e));
            CAPTURE(print_expr(n));
            FAIL_CHECK("h1 changed: " << h0.str() << " -> " << hn.str());
        }
        CHECK(free_boundary_count(e) == free_boundary_count(n));
        ManifoldExpr n2 = normalize(n);
        if (print_expr(n2) != print_expr(n)) {
            CAPTURE(print_expr(e));
            CAPTURE(print_expr(n));
            FAIL_CHECK("not idempotent: second pass gave " << print_expr(n2));
        }
    }
}

TEST_CASE("moved expressions stay equivalent to the original") {
    Rng rng(59);
    for (int id = 1; id <= 11; ++id) {
        CAPTURE(id);
        int done = 0, tries = 0;
        while (done < 80 && tries < 80 * 60) {
            ++tries;
            auto dm = draw_move(rng, id);
            if (!dm) continue;
            ManifoldExpr e2;
            try {
                e2 = apply_move(dm->first, dm->second);
            } catch (...) {
                continue;
            }
            EquivResult r = equivalent(dm->first, e2);
            if (r.verdict != Tri::yes) {
                CAPTURE(print_expr(dm->first));
                CAPTURE(print_expr(e2));
                FAIL_CHECK("verdict " << (r.verdict == Tri::no ? "no" : "unknown") << " ("
                                      << r.reason << ")");
            }
            ++done;
        }
        CHECK(done == 80);
    }
}
