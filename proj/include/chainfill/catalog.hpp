#pragma once

#include "chainfill/exactalg.hpp"
#include "chainfill/manifolds.hpp"
#include "chainfill/registry.hpp"

#include <array>
#include <optional>
#include <string>
#include <vector>

namespace chainfill {

struct RowReport {
    CatalogRow row;
    AbelianGroup from_expr;     // h1 of the printed expression
    AbelianGroup from_filling;  // h1 of the filled chain exterior
    AbelianGroup listed;        // the group printed in the table
    bool pass = false;
    std::string error;
};

RowReport verify_row(const CatalogRow& row);
std::vector<RowReport> verify_catalog(std::optional<int> table = std::nullopt);

// Parametrized families from the classification theorems. Ids:
//   Thm2.4-F1 (a,b,c,d,e,f,g,h)   two discs across [0,1;1,0]
//   Thm2.4-F2 (n in 0..3)         sporadic, matrix [1+n,2+n;-n,-1-n]
//   Thm2.4-F3 (a,b)               annulus self-glued by [0,1;1,0]
//   Thm2.4-F4 ()                  sporadic (A,(2,1))/[1,2;0,-1]
//   Thm2.7-F1 (a..j)              disc, annulus, disc
//   Thm2.7-F2 (a,b,c,d)           two annuli glued along both torus pairs
//   Thm2.7-F3 ()                  M1 u_[-1,0;1,1] (D,(2,1),(2,1))
//   Thm2.7-F4 ()                  M1 u_[-1,1;1,0] (D,(2,1),(2,1))
//   Thm2.11-F1 (a..l)             disc, annulus, annulus, disc
//   Thm2.11-F2 (a,b,c,d)          as Thm2.7-F2
//   Thm2.11-F3 (a..h, i,j,k,l)    M5(4 slopes) u_[0,1;1,0] disc, |i|,|k| >= 2
//   Thm2.11-F4 (a,b)              M2(a/b) u_[-1,0;1,1] (D,(2,1),(2,1))
//   Thm2.11-F5 (n in 3..6)        sporadic (A,(2,1))/[n-1,n;1,1]
//   Tbl25      (row index)        the Borromean rows as printed
ManifoldExpr generate_family(const std::string& spec_id,
                             const std::vector<long long>& params);
std::vector<std::string> family_spec_ids();

// A classifier verdict: the case label from the proposition's decision tree
// plus a representative expression of that case for homology cross-checks.
struct CaseResult {
    int label = 0;
    ManifoldExpr form;
};

// (D,(a,b),(c,d)) u_[0,1;1,0] (D,(e,f),(g,h)) -> cases 1..5:
// lens/sums, S2 three fibres, P2 two fibres, (K,1), graph as written.
CaseResult classify_two_block(long long a, long long b, long long c, long long d,
                              long long e, long long f, long long g, long long h);

// (A,(a,b)) / [0,1;1,0] -> 1 S2xS1, 2 torus bundle, 3 graph as written.
CaseResult classify_self_glue(long long a, long long b);

// (D,(a,b),(c,d)) u (A,(e,f)) u (D,(g,h),(i,j)), both matrices [0,1;1,0],
// cases 1..8 of the three-block proposition.
CaseResult classify_three_block(const std::array<long long, 10>& p);

// (A,(a,b)) glued to (A,(c,d)) along both torus pairs by [0,1;1,0],
// cases 1..4: (S2xS1)#lens, torus bundle, annulus self-glued, graph.
CaseResult classify_double_annulus(long long a, long long b, long long c, long long d);

// True iff B or -B equals [r,f;s,t] with r = 1 and t = -1 mod f
// (f = 0: exact equality). Throws unless det B = -1.
bool thm27_matrix_reachable(const Mat2& B);

struct FlatReport {
    long long bound = 0;
    bool identity_found = false;           // must stay false: the 3-torus is unreachable
    std::vector<long long> missing_shears; // |a| <= bound with [[-1,0],[a,-1]] absent
    int finite_order_bundles_found = 0;    // of the 4 flat bundle types besides the 3-torus
    bool four_fiber_flat_found = false;    // the S2(2,2,2,2) flat manifold, via the
                                           // three-block family
};

// Enumerates the double-annulus monodromies C(m,n,f) for |m|,|n|,|f| <= bound.
FlatReport flat_reachability(long long bound);
bool three_torus_unreachable(long long bound);

}  // namespace chainfill
