#include "chainfill/exactalg.hpp"

#include <algorithm>
#include <cstdlib>
#include <map>
#include <sstream>
#include <stdexcept>

namespace chainfill {

IMat IMat::identity(int n) {
    IMat m(n, n);
    for (int i = 0; i < n; ++i) m.at(i, i) = 1;
    return m;
}

IMat mul(const IMat& x, const IMat& y) {
    if (x.cols != y.rows) throw std::invalid_argument("mul: shape mismatch");
    IMat r(x.rows, y.cols);
    for (int i = 0; i < x.rows; ++i)
        for (int k = 0; k < x.cols; ++k) {
            const Integer& v = x.at(i, k);
            if (v == 0) continue;
            for (int j = 0; j < y.cols; ++j) r.at(i, j) += v * y.at(k, j);
        }
    return r;
}

Integer det(IMat m) {
    if (m.rows != m.cols) throw std::invalid_argument("det: not square");
    int n = m.rows;
    if (n == 0) return 1;
    Integer prev = 1;
    int sign = 1;
    for (int k = 0; k < n - 1; ++k) {
        if (m.at(k, k) == 0) {
            int piv = -1;
            for (int i = k + 1; i < n; ++i)
                if (m.at(i, k) != 0) { piv = i; break; }
            if (piv < 0) return 0;
            for (int j = 0; j < n; ++j) std::swap(m.at(k, j), m.at(piv, j));
            sign = -sign;
        }
        for (int i = k + 1; i < n; ++i)
            for (int j = k + 1; j < n; ++j)
                m.at(i, j) = (m.at(i, j) * m.at(k, k) - m.at(i, k) * m.at(k, j)) / prev;
        prev = m.at(k, k);
    }
    return sign > 0 ? m.at(n - 1, n - 1) : -m.at(n - 1, n - 1);
}

namespace {

struct SnfWork {
    IMat m, u, v;

    explicit SnfWork(const IMat& in)
        : m(in), u(IMat::identity(in.rows)), v(IMat::identity(in.cols)) {}

    void swap_rows(int i, int j) {
        if (i == j) return;
        for (int c = 0; c < m.cols; ++c) std::swap(m.at(i, c), m.at(j, c));
        for (int c = 0; c < u.cols; ++c) std::swap(u.at(i, c), u.at(j, c));
    }
    void swap_cols(int i, int j) {
        if (i == j) return;
        for (int r = 0; r < m.rows; ++r) std::swap(m.at(r, i), m.at(r, j));
        for (int r = 0; r < v.rows; ++r) std::swap(v.at(r, i), v.at(r, j));
    }
    void negate_row(int i) {
        for (int c = 0; c < m.cols; ++c) m.at(i, c) = -m.at(i, c);
        for (int c = 0; c < u.cols; ++c) u.at(i, c) = -u.at(i, c);
    }
    // row i -= q * row j
    void row_sub(int i, int j, const Integer& q) {
        if (q == 0) return;
        for (int c = 0; c < m.cols; ++c) m.at(i, c) -= q * m.at(j, c);
        for (int c = 0; c < u.cols; ++c) u.at(i, c) -= q * u.at(j, c);
    }
    // col i -= q * col j
    void col_sub(int i, int j, const Integer& q) {
        if (q == 0) return;
        for (int r = 0; r < m.rows; ++r) m.at(r, i) -= q * m.at(r, j);
        for (int r = 0; r < v.rows; ++r) v.at(r, i) -= q * v.at(r, j);
    }
    void row_add(int i, int j) {
        for (int c = 0; c < m.cols; ++c) m.at(i, c) += m.at(j, c);
        for (int c = 0; c < u.cols; ++c) u.at(i, c) += u.at(j, c);
    }
};

Integer floordiv(const Integer& a, const Integer& b) {
    Integer q = a / b, r = a % b;
    if (r != 0 && ((r < 0) != (b < 0))) --q;
    return q;
}

}  // namespace

SNFResult smith_normal_form(const IMat& in) {
    SnfWork w(in);
    const int R = in.rows, C = in.cols;
    int t = 0;
    while (t < std::min(R, C)) {
        int pr = -1, pc = -1;
        Integer best = 0;
        for (int i = t; i < R; ++i)
            for (int j = t; j < C; ++j) {
                Integer v = abs(w.m.at(i, j));
                if (v != 0 && (best == 0 || v < best)) {
                    best = v;
                    pr = i;
                    pc = j;
                }
            }
        if (pr < 0) break;
        w.swap_rows(t, pr);
        w.swap_cols(t, pc);
        if (w.m.at(t, t) < 0) w.negate_row(t);
        for (;;) {
            bool moved = false;
            for (int i = t + 1; i < R; ++i) {
                if (w.m.at(i, t) == 0) continue;
                Integer q = floordiv(w.m.at(i, t), w.m.at(t, t));
                w.row_sub(i, t, q);
                if (w.m.at(i, t) != 0) {  // remainder is a smaller pivot
                    w.swap_rows(t, i);
                    if (w.m.at(t, t) < 0) w.negate_row(t);
                    moved = true;
                    break;
                }
            }
            if (moved) continue;
            for (int j = t + 1; j < C; ++j) {
                if (w.m.at(t, j) == 0) continue;
                Integer q = floordiv(w.m.at(t, j), w.m.at(t, t));
                w.col_sub(j, t, q);
                if (w.m.at(t, j) != 0) {
                    w.swap_cols(t, j);
                    if (w.m.at(t, t) < 0) w.negate_row(t);
                    moved = true;
                    break;
                }
            }
            if (!moved) break;
        }
        // divisor-chain repair: pivot must divide everything below-right
        bool fixed = false;
        for (int i = t + 1; i < R && !fixed; ++i)
            for (int j = t + 1; j < C; ++j)
                if (w.m.at(i, j) % w.m.at(t, t) != 0) {
                    w.row_add(t, i);
                    fixed = true;
                    break;
                }
        if (fixed) continue;
        ++t;
    }
    return {w.u, w.m, w.v};
}

AbelianGroup make_group(long long free, std::vector<Integer> torsion) {
    std::vector<Integer> tor;
    for (auto& x : torsion) {
        Integer v = abs(x);
        if (v > 1) tor.push_back(v);
    }
    AbelianGroup g;
    g.free = free;
    if (tor.empty()) return g;
    int n = static_cast<int>(tor.size());
    IMat d(n, n);
    for (int i = 0; i < n; ++i) d.at(i, i) = tor[i];
    IMat s = smith_normal_form(d).S;
    for (int i = 0; i < n; ++i)
        if (s.at(i, i) > 1) g.torsion.push_back(s.at(i, i));
    return g;
}

std::string AbelianGroup::str() const {
    std::vector<std::string> parts;
    if (free == 1) {
        parts.push_back("Z");
    } else if (free > 1) {
        parts.push_back("Z^" + std::to_string(free));
    }
    size_t i = 0;
    while (i < torsion.size()) {
        size_t j = i;
        while (j < torsion.size() && torsion[j] == torsion[i]) ++j;
        std::string base = "Z" + torsion[i].str();
        if (j - i > 1) base += "^" + std::to_string(j - i);
        parts.push_back(base);
        i = j;
    }
    if (parts.empty()) return "0";
    std::string out = parts[0];
    for (size_t k = 1; k < parts.size(); ++k) out += " x " + parts[k];
    return out;
}

AbelianGroup parse_group(const std::string& text) {
    std::string s;
    for (char c : text)
        if (c != ' ') s += c;
    if (s == "0") return {};
    long long free = 0;
    std::vector<Integer> tor;
    size_t pos = 0;
    while (pos < s.size()) {
        size_t end = s.find('x', pos);
        std::string tok = s.substr(pos, end == std::string::npos ? end : end - pos);
        pos = end == std::string::npos ? s.size() : end + 1;
        if (tok.empty() || tok[0] != 'Z')
            throw std::invalid_argument("bad group token: " + tok);
        std::string num, pow;
        size_t caret = tok.find('^');
        num = tok.substr(1, caret == std::string::npos ? caret : caret - 1);
        if (caret != std::string::npos) pow = tok.substr(caret + 1);
        long long k = pow.empty() ? 1 : std::stoll(pow);
        if (k < 1) throw std::invalid_argument("bad group power: " + tok);
        if (num.empty()) {
            free += k;
        } else {
            Integer n(num);
            for (long long r = 0; r < k; ++r) tor.push_back(n);
        }
    }
    return make_group(free, std::move(tor));
}

AbelianGroup cokernel(const IMat& m) {
    if (m.rows == 0 || m.cols == 0) return make_group(m.cols, {});
    IMat s = smith_normal_form(m).S;
    int rank = 0;
    std::vector<Integer> tor;
    for (int i = 0; i < std::min(m.rows, m.cols); ++i)
        if (s.at(i, i) != 0) {
            ++rank;
            tor.push_back(s.at(i, i));
        }
    return make_group(m.cols - rank, std::move(tor));
}

bool abelian_iso(const AbelianGroup& g, const AbelianGroup& h) { return g == h; }

Mat2 mul(const Mat2& x, const Mat2& y) {
    return {x.a * y.a + x.b * y.c, x.a * y.b + x.b * y.d,
            x.c * y.a + x.d * y.c, x.c * y.b + x.d * y.d};
}

Mat2 Mat2::inverse() const {
    long long dt = det();
    if (dt != 1 && dt != -1) throw std::invalid_argument("Mat2::inverse: det not +-1");
    return {dt * d, -dt * b, -dt * c, dt * a};
}

std::string Mat2::str() const {
    std::ostringstream os;
    os << "[" << a << "," << b << ";" << c << "," << d << "]";
    return os.str();
}

namespace {

IMat mat2_minus(const Mat2& m, long long eps) {
    // rows of the relation matrix for coker(m - eps*I), matching cokernel()
    IMat r(2, 2);
    r.at(0, 0) = m.a - eps;
    r.at(0, 1) = m.c;
    r.at(1, 0) = m.b;
    r.at(1, 1) = m.d - eps;
    return r;
}

struct Key {
    std::array<long long, 4> v;
    bool operator<(const Key& o) const { return v < o.v; }
};

Key key_of(const Mat2& m) { return {{m.a, m.b, m.c, m.d}}; }

}  // namespace

ConjugacyResult gl2_conjugate(const Mat2& A, const Mat2& B, int word_bound) {
    if (A.det() != 1 || B.det() != 1)
        throw std::invalid_argument("gl2_conjugate: inputs must have det +1");
    if (word_bound < 1)
        throw std::invalid_argument("gl2_conjugate: word_bound must be >= 1");

    ConjugacyResult res;
    if (A.a + A.d != B.a + B.d) {
        res.verdict = Tri::no;
        res.obstruction = "trace";
        return res;
    }
    if (cokernel(mat2_minus(A, 1)) != cokernel(mat2_minus(B, 1))) {
        res.verdict = Tri::no;
        res.obstruction = "coker(A - I)";
        return res;
    }
    if (cokernel(mat2_minus(A, -1)) != cokernel(mat2_minus(B, -1))) {
        res.verdict = Tri::no;
        res.obstruction = "coker(A + I)";
        return res;
    }

    const Mat2 S{0, 1, -1, 0}, T{1, 1, 0, 1}, J{1, 0, 0, -1};
    const std::vector<std::pair<Mat2, std::string>> gens = {
        {S, "S"}, {S.inverse(), "S^-1"}, {T, "T"}, {T.inverse(), "T^-1"}, {J, "J"}};

    std::map<Key, std::string> seen;
    std::vector<std::pair<Mat2, std::string>> frontier = {{Mat2{}, ""}};
    seen[key_of(Mat2{})] = "";
    for (int depth = 0; depth <= word_bound; ++depth) {
        for (auto& [U, word] : frontier) {
            if (mul(U, A) == mul(B, U)) {
                res.verdict = Tri::yes;
                res.witness = U;
                res.word = word.empty() ? "e" : word;
                return res;
            }
        }
        if (depth == word_bound) break;
        std::vector<std::pair<Mat2, std::string>> next;
        for (auto& [U, word] : frontier)
            for (auto& [g, name] : gens) {
                Mat2 W = mul(g, U);
                auto k = key_of(W);
                if (seen.count(k)) continue;
                std::string w = word.empty() ? name : name + " " + word;
                seen[k] = w;
                next.emplace_back(W, w);
            }
        frontier = std::move(next);
    }
    res.verdict = Tri::unknown;
    return res;
}

}  // namespace chainfill
