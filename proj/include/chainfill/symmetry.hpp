#pragma once

#include "chainfill/exactalg.hpp"
#include "chainfill/manifolds.hpp"

#include <optional>
#include <string>
#include <vector>

namespace chainfill {

using FillingTuple = std::vector<std::optional<Slope>>;

// Projective action of [[a,b],[c,d]] on p/q: (a*p + b*q)/(c*p + d*q), with
// infinity = 1/0. A matrix and its negation act identically.
Slope apply_slope_map(const Mat2& m, const Slope& s);

// Cusp permutation with one slope map per cusp: the slope at cusp i lands at
// position perm[i] after passing through maps[i]. Unfilled cusps permute
// unchanged.
struct CuspSymmetry {
    std::vector<int> perm;
    std::vector<Mat2> maps;

    bool operator==(const CuspSymmetry&) const = default;
};

CuspSymmetry identity_symmetry(int cusps);
// act(compose(s1, s2), t) = act(s1, act(s2, t))
CuspSymmetry compose(const CuspSymmetry& s1, const CuspSymmetry& s2);
FillingTuple act(const CuspSymmetry& s, const FillingTuple& t);

struct SymmetryGroup {
    std::vector<CuspSymmetry> elements;

    size_t size() const { return elements.size(); }
};

// Breadth-first closure of the generators; throws std::runtime_error past
// max_size or when declared_order is present and the closure misses it.
// Elements are deduplicated up to matrix sign (projective action).
SymmetryGroup close(const std::vector<CuspSymmetry>& generators, size_t max_size,
                    std::optional<long long> declared_order = std::nullopt);

// Total order: unfilled < infinity < rationals by value; tuples lexicographic.
bool slope_less(const std::optional<Slope>& x, const std::optional<Slope>& y);
bool tuple_less(const FillingTuple& x, const FillingTuple& y);

std::vector<FillingTuple> orbit(const SymmetryGroup& g, const FillingTuple& t);
FillingTuple canonical_rep(const SymmetryGroup& g, const FillingTuple& t);

// Orbit of a single slope under iterating one projective map.
std::vector<Slope> slope_orbit(const Mat2& m, const Slope& s, size_t max_size = 64);

// Closure of the generators shipped with the family registry.
SymmetryGroup family_group(const std::string& family);

// Factoring predicate: the tuple contains a slope from the family's reducing
// set, or the designated pair on two cyclically adjacent cusps.
bool factors(const std::string& family, const FillingTuple& t);
// "true (slope -1)" / "true (pair (-2,-2) consecutive)" / "false"
std::string factor_reason(const std::string& family, const FillingTuple& t);

}  // namespace chainfill
