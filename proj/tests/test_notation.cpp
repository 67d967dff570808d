#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "chainfill/notation.hpp"
#include "chainfill/registry.hpp"
#include "gen.hpp"

#include "json.hpp"

using namespace chainfill;

TEST_CASE("every catalog expression round trips through print and parse") {
    for (const CatalogRow& row : Registry::instance().catalog()) {
        CAPTURE(row.expr);
        ManifoldExpr e = parse_expr(row.expr);
        std::string printed = print_expr(e);
        CHECK(parse_expr(printed) == e);
        CHECK(print_expr(parse_expr(printed)) == printed);
    }
}

TEST_CASE("random expressions round trip") {
    testgen::Rng rng(20260815);
    testgen::GenOptions opt;
    opt.allow_named = true;
    opt.allow_self = true;
    opt.allow_zero_fiber = true;
    for (int i = 0; i < 400; ++i) {
        ManifoldExpr e = make_expr(testgen::random_chain(rng, opt));
        std::string printed = print_expr(e);
        CAPTURE(printed);
        CHECK(parse_expr(printed) == e);
    }
}

TEST_CASE("atoms and aliases") {
    CHECK(parse_expr("S3") == make_expr(LensSpace{1, 0}));
    CHECK(parse_expr("S2xS1") == make_expr(LensSpace{0, 1}));
    CHECK(parse_expr("RP3") == make_expr(LensSpace{2, 1}));
    CHECK(parse_expr("DxS1") == parse_expr("SFS(D;)"));
    CHECK(parse_expr("AxS1") == parse_expr("SFS(A;)"));
    CHECK(parse_expr("MbxS1") == parse_expr("SFS(Mb;)"));
    CHECK(print_expr(parse_expr("SFS(D;)")) == "DxS1");
    CHECK(print_expr(parse_expr("TB[3,1;-1,0]")) == "TB[3,1;-1,0]");
    CHECK(parse_expr("L(7,2) # L(3,1)") ==
          make_expr(ConnectedSum{{make_expr(LensSpace{7, 2}), make_expr(LensSpace{3, 1})}}));
}

TEST_CASE("fibers are stored exactly as written") {
    ManifoldExpr e = parse_expr("SFS(S2;(2,1),(2,1),(3,-7))");
    const auto& g = std::get<GraphManifold>(e.v);
    const auto& s = std::get<SeifertBlock>(g.blocks[0]);
    REQUIRE(s.fibers.size() == 3);
    CHECK(s.fibers[2] == FiberPair{3, -7});
    CHECK(print_expr(e) == "SFS(S2;(2,1),(2,1),(3,-7))");
}

TEST_CASE("whitespace is ignored") {
    CHECK(parse_expr("  SFS( D ; (2,1) , (2,1) ) = [ 0,1 ; 1,0 ] = SFS(A;(2,1))  ") ==
          parse_expr("SFS(D;(2,1),(2,1))=[0,1;1,0]=SFS(A;(2,1))"));
}

TEST_CASE("stacked matrices and self gluings parse") {
    ManifoldExpr doubled = parse_expr("AxS1=[0,1;1,0][0,1;1,0]=AxS1");
    const auto& g = std::get<GraphManifold>(doubled.v);
    REQUIRE(g.junctions.size() == 1);
    CHECK(g.junctions[0].size() == 2);

    ManifoldExpr self = parse_expr("SFS(A;(2,1))/[2,3;1,1]");
    const auto& h = std::get<GraphManifold>(self.v);
    REQUIRE(h.self_gluing.has_value());
    CHECK(*h.self_gluing == Mat2{2, 3, 1, 1});
    CHECK(print_expr(self) == "SFS(A;(2,1))/[2,3;1,1]");
}

TEST_CASE("named blocks carry their fillings") {
    ManifoldExpr e = parse_expr("M5(-1,.,1/2,inf,.)");
    const auto& g = std::get<GraphManifold>(e.v);
    const auto& n = std::get<NamedBlock>(g.blocks[0]);
    REQUIRE(n.fillings.size() == 5);
    CHECK(*n.fillings[0] == make_slope(-1, 1));
    CHECK_FALSE(n.fillings[1].has_value());
    CHECK(*n.fillings[2] == make_slope(1, 2));
    CHECK(*n.fillings[3] == Slope{1, 0});
    CHECK(print_expr(e) == "M5(-1,.,1/2,inf,.)");
}

TEST_CASE("parse errors carry a position") {
    for (const char* bad : {"", "SFS(", "SFS(D;(2,1)", "L(2,", "TB[1,2;3]",
                            "SFS(Q;(2,1))", "L(2,1) #", "SFS(D;(2,1)) = [0,1;1,0]",
                            "M9(1,2)", "[0,1;1,0]"}) {
        CAPTURE(bad);
        CHECK_THROWS_AS(parse_expr(bad), ParseError);
    }
    bool thrown = false;
    try {
        parse_expr("L(2,1) # L(x)");
    } catch (const ParseError& e) {
        thrown = true;
        CHECK(e.pos >= 9);
        CHECK(std::string(e.what()).find("offset") != std::string::npos);
    }
    CHECK(thrown);
}

TEST_CASE("slope tokens") {
    CHECK_FALSE(parse_slope_token(".").has_value());
    CHECK(*parse_slope_token("inf") == Slope{1, 0});
    CHECK(*parse_slope_token("5/2") == Slope{5, 2});
    CHECK(*parse_slope_token("-1") == Slope{-1, 1});
    CHECK(make_slope(7, -2) == Slope{-7, 2});
    CHECK(make_slope(-4, -6) == Slope{2, 3});
    CHECK(slope_str(Slope{1, 0}) == "inf");
    CHECK(slope_str(Slope{0, 1}) == "0");
    CHECK(slope_str(make_slope(-7, 2)) == "-7/2");

    auto t = parse_slopes("-1,.,inf");
    REQUIRE(t.size() == 3);
    CHECK(slopes_str(t) == "-1,.,inf");
    CHECK(slopes_str(parse_slopes("-2,-2,0,0,0,0,0")) == "-2,-2,0,0,0,0,0");
}

TEST_CASE("json form is well formed and deterministic") {
    for (const char* text :
         {"SFS(D;(2,1),(2,1))=[0,1;1,0]=SFS(A;(2,1))", "TB[3,1;-1,0]", "L(7,2) # S2xS1",
          "M5(-1,.,1/2,inf,.)", "SFS(A;(2,1))/[2,3;1,1]"}) {
        ManifoldExpr e = parse_expr(text);
        std::string j1 = expr_to_json(e);
        std::string j2 = expr_to_json(e);
        CHECK(j1 == j2);
        nlohmann::json parsed = nlohmann::json::parse(j1);
        CHECK(parsed.contains("type"));
        CHECK(j1.find('\n') == std::string::npos);
    }
    nlohmann::json chain = nlohmann::json::parse(
        expr_to_json(parse_expr("SFS(D;(2,1),(2,1))=[0,1;1,0]=SFS(A;(2,1))")));
    CHECK(chain["type"] == "chain");
    CHECK(chain["blocks"].size() == 2);
    CHECK(chain["gluings"].size() == 1);
}
