#pragma once

#include "chainfill/exactalg.hpp"
#include "chainfill/manifolds.hpp"

#include <string>

namespace chainfill {

// A move application site. `id` selects the rewrite rule:
//   1  reverse orientation: negate every fiber q, conjugate matrices
//   2  shift k between two fibers of a block (b += k*a, d -= k*c)
//   3  twist one fiber by k*p; needs a free boundary torus to absorb the twist
//   4  drop a (1,0) fiber, or insert one with add=true
//   5  negate a gluing matrix (distinct blocks only)
//   6  twist fiber of the left block across a gluing, matrix gains a column op
//   7  twist fiber of the right block, matrix gains a row op
//   8  trade a leading (D,(2,1),(2,1)) for the Moebius circle bundle (add=true
//      for the reverse direction)
//   9  same trade on the right-hand side of a gluing
//   10 split a closed orientable block along a (0,1) fiber into lens summands
//   11 dissolve a (D,(0,1),(a,b)) block across a gluing into L(a,b) plus a
//      compensating fiber on the neighbour
struct MoveId {
    int id = 0;
    int block = -1;
    int fiber = -1;
    int fiber2 = -1;
    int gluing = -1;  // index into compute_ports(g).sites
    long long k = 0;
    bool add = false;
};

// Applies one move; throws std::invalid_argument when the site is missing or
// a precondition fails (move 5 on the self-gluing, move 8/9 on a block other
// than (D,(2,1),(2,1)), ...).
ManifoldExpr apply_move(const ManifoldExpr& e, const MoveId& move);

// Geometric intersection number of the fibers across a gluing: |n| for
// [[m,n],[p,q]]. Invariant under moves 5-7.
long long fiber_intersection(const Mat2& m);
long long fiber_intersection(const GraphManifold& g, int site);

ManifoldExpr normalize(const ManifoldExpr& e);

struct EquivResult {
    Tri verdict = Tri::unknown;
    std::string reason;
};

// Decides equivalence where a procedure exists: identical normal forms, the
// unoriented lens criterion q' = +-q^{+-1} (mod p), torus-bundle monodromy
// conjugacy up to inversion. "no" is only reported with a differing complete
// invariant named in `reason`.
EquivResult equivalent(const ManifoldExpr& e1, const ManifoldExpr& e2);

}  // namespace chainfill
