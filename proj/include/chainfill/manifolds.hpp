#pragma once

#include "chainfill/exactalg.hpp"

#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace chainfill {

// Base surface of a Seifert block. For non-orientable surfaces `genus` counts
// crosscaps (RP2 = 1, Klein bottle = 2).
struct BaseSurface {
    bool orientable = true;
    int genus = 0;
    int boundary = 0;

    bool operator==(const BaseSurface&) const = default;
};

inline constexpr BaseSurface kS2{true, 0, 0};
inline constexpr BaseSurface kDisc{true, 0, 1};
inline constexpr BaseSurface kAnnulus{true, 0, 2};
inline constexpr BaseSurface kPants{true, 0, 3};
inline constexpr BaseSurface kRP2{false, 1, 0};
inline constexpr BaseSurface kMoebius{false, 1, 1};
inline constexpr BaseSurface kKlein{false, 2, 0};

struct FiberPair {
    long long p = 1;
    long long q = 0;

    bool operator==(const FiberPair&) const = default;
};

struct SeifertBlock {
    BaseSurface base;
    std::vector<FiberPair> fibers;

    bool operator==(const SeifertBlock&) const = default;
};

// Filling slope p/q, stored reduced with q >= 0 (infinity = (1,0)).
struct Slope {
    long long p = 1;
    long long q = 0;

    bool operator==(const Slope&) const = default;
};

Slope make_slope(long long p, long long q);  // reduces and fixes signs
std::string slope_str(const Slope& s);

// Cusped census block (chain-link exterior) with per-cusp fillings; an
// unfilled cusp in a chain acts as a gluing port in cusp order.
struct NamedBlock {
    std::string name;
    std::vector<std::optional<Slope>> fillings;

    bool operator==(const NamedBlock&) const = default;
};

using Block = std::variant<SeifertBlock, NamedBlock>;

// Pieces in a row; junction j carries the stack of gluing matrices between
// piece j and piece j+1 (two entries = a pair of parallel tori). The optional
// final matrix glues the first two ports left free, in block order.
struct GraphManifold {
    std::vector<Block> blocks;
    std::vector<std::vector<Mat2>> junctions;
    std::optional<Mat2> self_gluing;

    bool operator==(const GraphManifold&) const = default;
};

struct TorusBundle {
    Mat2 monodromy;

    bool operator==(const TorusBundle&) const = default;
};

struct LensSpace {
    long long p = 1;
    long long q = 0;

    bool operator==(const LensSpace&) const = default;
};

struct ManifoldExpr;

struct ConnectedSum {
    std::vector<ManifoldExpr> parts;

    bool operator==(const ConnectedSum&) const;
};

struct ManifoldExpr {
    std::variant<GraphManifold, TorusBundle, LensSpace, ConnectedSum> v;

    bool operator==(const ManifoldExpr&) const = default;
};

ManifoldExpr make_expr(GraphManifold g);
ManifoldExpr make_expr(TorusBundle t);
ManifoldExpr make_expr(LensSpace l);
ManifoldExpr make_expr(ConnectedSum s);

// D x S1 as a one-block graph manifold.
GraphManifold solid_torus();
// Chain-link exterior with the given fillings as a one-block graph manifold.
GraphManifold filled_block(const std::string& family,
                           const std::vector<std::optional<Slope>>& fillings);

int cusp_count(const std::string& family);  // 0 when the name is unknown
bool known_family(const std::string& family);

// Port bookkeeping shared by validation, homology and the move engine.
// Ports of a block are its boundary tori in order: for a Seifert block the
// base's boundary components, for a named block its unfilled cusps.
struct PortRef {
    int block = -1;
    int port = -1;

    bool operator==(const PortRef&) const = default;
};

struct GluingSite {
    PortRef left, right;
    Mat2 m;
    bool self = false;  // final self-identification
};

struct PortTable {
    std::vector<int> capacity;   // ports per block
    std::vector<int> used;       // consumed by gluings, in order from port 0
    std::vector<GluingSite> sites;
    std::vector<std::string> errors;

    int free_ports() const;
};

PortTable compute_ports(const GraphManifold& g);

// Structural diagnostics; empty result means the expression is well-formed.
std::vector<std::string> validate(const ManifoldExpr& e);

int free_boundary_count(const ManifoldExpr& e);

}  // namespace chainfill
