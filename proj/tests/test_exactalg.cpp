#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "chainfill/exactalg.hpp"

#include <random>

using namespace chainfill;

namespace {

using Rng = std::mt19937;

IMat random_mat(Rng& rng, int rows, int cols, int span) {
    IMat m(rows, cols);
    std::uniform_int_distribution<int> d(-span, span);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) m.at(i, j) = d(rng);
    return m;
}

Mat2 word_matrix(Rng& rng, int len) {
    const Mat2 S{0, 1, -1, 0}, T{1, 1, 0, 1};
    Mat2 m;
    std::uniform_int_distribution<int> d(0, 2);
    for (int i = 0; i < len; ++i) {
        switch (d(rng)) {
            case 0: m = mul(m, S); break;
            case 1: m = mul(m, T); break;
            default: m = mul(m, T.inverse()); break;
        }
    }
    return m;
}

}  // namespace

TEST_CASE("smith normal form diagonalizes with unimodular factors") {
    Rng rng(11);
    for (int iter = 0; iter < 200; ++iter) {
        int rows = 1 + static_cast<int>(rng() % 6);
        int cols = 1 + static_cast<int>(rng() % 6);
        IMat m = random_mat(rng, rows, cols, 9);
        SNFResult r = smith_normal_form(m);
        CHECK(mul(mul(r.U, m), r.V) == r.S);
        Integer du = det(r.U), dv = det(r.V);
        CHECK((du == 1 || du == -1));
        CHECK((dv == 1 || dv == -1));
        Integer prev = 0;
        for (int i = 0; i < std::min(rows, cols); ++i) {
            for (int j = 0; j < cols; ++j)
                if (j != i) CHECK(r.S.at(i, j) == 0);
            Integer d = r.S.at(i, i);
            CHECK(d >= 0);
            if (prev != 0) CHECK((d == 0 || d % prev == 0));
            if (d != 0) prev = d;
            else CHECK(prev >= 0);
        }
    }
}

TEST_CASE("smith normal form is stable on its own diagonal") {
    Rng rng(12);
    for (int iter = 0; iter < 50; ++iter) {
        IMat m = random_mat(rng, 4, 5, 6);
        IMat s = smith_normal_form(m).S;
        CHECK(smith_normal_form(s).S == s);
    }
}

TEST_CASE("determinant matches cofactor expansion on small matrices") {
    Rng rng(13);
    for (int iter = 0; iter < 200; ++iter) {
        IMat m = random_mat(rng, 3, 3, 8);
        Integer cof = 0;
        cof += m.at(0, 0) * (m.at(1, 1) * m.at(2, 2) - m.at(1, 2) * m.at(2, 1));
        cof -= m.at(0, 1) * (m.at(1, 0) * m.at(2, 2) - m.at(1, 2) * m.at(2, 0));
        cof += m.at(0, 2) * (m.at(1, 0) * m.at(2, 1) - m.at(1, 1) * m.at(2, 0));
        CHECK(det(m) == cof);
    }
    CHECK(det(IMat::identity(5)) == 1);
}

TEST_CASE("cokernel pinned values") {
    IMat d23(2, 2);
    d23.at(0, 0) = 2;
    d23.at(1, 1) = 3;
    CHECK(cokernel(d23) == make_group(0, {6}));

    IMat d24(2, 2);
    d24.at(0, 0) = 2;
    d24.at(1, 1) = 4;
    CHECK(cokernel(d24) == make_group(0, {2, 4}));

    IMat zero(1, 2);
    CHECK(cokernel(zero) == make_group(2, {}));

    IMat unit(1, 1);
    unit.at(0, 0) = 1;
    CHECK(cokernel(unit) == make_group(0, {}));
    CHECK(cokernel(unit).str() == "0");
}

TEST_CASE("cokernel is invariant under unimodular row mixing") {
    Rng rng(14);
    for (int iter = 0; iter < 60; ++iter) {
        IMat m = random_mat(rng, 3, 4, 7);
        IMat u(3, 3);
        u = IMat::identity(3);
        u.at(0, 1) = static_cast<long long>(rng() % 5) - 2;
        u.at(2, 0) = static_cast<long long>(rng() % 5) - 2;
        CHECK(abelian_iso(cokernel(m), cokernel(mul(u, m))));
    }
}

TEST_CASE("group grammar round trips") {
    for (const char* text : {"0", "Z", "Z^2", "Z4", "Z x Z7", "Z2^2", "Z x Z2 x Z6",
                             "Z^3", "Z35", "Z2 x Z12"}) {
        AbelianGroup g = parse_group(text);
        CHECK(g.str() == text);
        CHECK(parse_group(g.str()) == g);
    }
    CHECK(abelian_iso(parse_group("Z2 x Z3"), parse_group("Z6")));
    CHECK(abelian_iso(parse_group("Z2 x Z2 x Z3"), parse_group("Z2 x Z6")));
    CHECK_FALSE(abelian_iso(parse_group("Z4"), parse_group("Z2^2")));
    CHECK(make_group(0, {4, 6}) == parse_group("Z2 x Z12"));
    CHECK(make_group(1, {1}) == parse_group("Z"));
}

TEST_CASE("mat2 arithmetic") {
    Mat2 a{2, 1, 1, 1}, b{0, 1, -1, 0};
    CHECK(mul(a, a.inverse()) == Mat2{});
    CHECK(mul(b, b.inverse()) == Mat2{});
    CHECK(a.det() == 1);
    CHECK(b.neg() == Mat2{0, -1, 1, 0});
    CHECK(Mat2{1, 2, 3, 4}.det() == -2);
}

TEST_CASE("gl2 conjugacy finds witnesses for conjugate pairs") {
    Rng rng(15);
    int yes = 0;
    for (int iter = 0; iter < 120; ++iter) {
        Mat2 a = word_matrix(rng, 1 + static_cast<int>(rng() % 5));
        Mat2 u = word_matrix(rng, 1 + static_cast<int>(rng() % 4));
        if (rng() % 2) u = mul(u, Mat2{1, 0, 0, -1});
        Mat2 b = mul(mul(u, a), u.inverse());
        ConjugacyResult r = gl2_conjugate(a, b, 8);
        CHECK(r.verdict != Tri::no);
        if (r.verdict == Tri::yes) {
            ++yes;
            REQUIRE(r.witness.has_value());
            CHECK(mul(mul(*r.witness, a), r.witness->inverse()) == b);
            CHECK_FALSE(r.word.empty());
        }
    }
    CHECK(yes > 80);
}

TEST_CASE("gl2 conjugacy separates by invariants") {
    ConjugacyResult tr = gl2_conjugate(Mat2{2, 1, 1, 1}, Mat2{1, 0, 0, 1}, 6);
    CHECK(tr.verdict == Tri::no);
    CHECK_FALSE(tr.obstruction.empty());

    ConjugacyResult shear = gl2_conjugate(Mat2{1, 1, 0, 1}, Mat2{1, 2, 0, 1}, 6);
    CHECK(shear.verdict == Tri::no);
    CHECK_FALSE(shear.obstruction.empty());
}

TEST_CASE("gl2 conjugacy resolves the equal-discriminant pair") {
    ConjugacyResult r = gl2_conjugate(Mat2{3, 1, -1, 0}, Mat2{2, 1, 1, 1}, 8);
    REQUIRE(r.verdict == Tri::yes);
    REQUIRE(r.witness.has_value());
    CHECK(mul(mul(*r.witness, Mat2{3, 1, -1, 0}), r.witness->inverse()) == Mat2{2, 1, 1, 1});
}

TEST_CASE("gl2 conjugacy handles inverse shears via reflection") {
    ConjugacyResult r = gl2_conjugate(Mat2{1, 1, 0, 1}, Mat2{1, -1, 0, 1}, 6);
    REQUIRE(r.verdict == Tri::yes);
    CHECK(mul(mul(*r.witness, Mat2{1, 1, 0, 1}), r.witness->inverse()) == Mat2{1, -1, 0, 1});
}
