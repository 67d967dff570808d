#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <array>
#include <optional>
#include <string>
#include <vector>

namespace chainfill {

using Integer = boost::multiprecision::cpp_int;

// Dense integer matrix, row-major.
struct IMat {
    int rows = 0;
    int cols = 0;
    std::vector<Integer> a;

    IMat() = default;
    IMat(int r, int c) : rows(r), cols(c), a(static_cast<size_t>(r) * c) {}

    Integer& at(int i, int j) { return a[static_cast<size_t>(i) * cols + j]; }
    const Integer& at(int i, int j) const { return a[static_cast<size_t>(i) * cols + j]; }

    static IMat identity(int n);
    bool operator==(const IMat&) const = default;
};

IMat mul(const IMat& x, const IMat& y);
Integer det(IMat m);  // Bareiss, exact

// U, V unimodular with U * M * V = S, S diagonal with divisor chain.
struct SNFResult {
    IMat U;
    IMat S;
    IMat V;
};

SNFResult smith_normal_form(const IMat& m);

// Finitely generated abelian group in invariant-factor form.
struct AbelianGroup {
    long long free = 0;
    std::vector<Integer> torsion;  // divisor chain, each > 1

    bool operator==(const AbelianGroup&) const = default;
    std::string str() const;
};

// Canonicalizes an arbitrary torsion multiset into a divisor chain.
AbelianGroup make_group(long long free, std::vector<Integer> torsion);
AbelianGroup parse_group(const std::string& text);

// Z^cols / row-span(M).
AbelianGroup cokernel(const IMat& m);

bool abelian_iso(const AbelianGroup& g, const AbelianGroup& h);

// 2x2 integer matrix [[a,b],[c,d]], the workhorse for gluings and monodromies.
struct Mat2 {
    long long a = 1, b = 0, c = 0, d = 1;

    bool operator==(const Mat2&) const = default;
    long long det() const { return a * d - b * c; }
    Mat2 inverse() const;  // requires det = +-1
    Mat2 neg() const { return {-a, -b, -c, -d}; }
    std::string str() const;
};

Mat2 mul(const Mat2& x, const Mat2& y);

enum class Tri { yes, no, unknown };

struct ConjugacyResult {
    Tri verdict = Tri::unknown;
    std::optional<Mat2> witness;  // U with U*A*U^-1 = B when verdict = yes
    std::string word;             // witness as a word in S, T, J
    std::string obstruction;      // invariant that separated A from B when verdict = no
};

// Decides conjugacy of A, B in GL(2,Z) by invariant prefilters plus a
// breadth-first search over conjugator words of length <= word_bound in the
// generators S = [[0,1],[-1,0]], T = [[1,1],[0,1]], J = [[1,0],[0,-1]].
// Requires det A = det B = +1 and word_bound >= 1.
ConjugacyResult gl2_conjugate(const Mat2& A, const Mat2& B, int word_bound);

}  // namespace chainfill
