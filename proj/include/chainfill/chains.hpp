#pragma once

#include "chainfill/exactalg.hpp"
#include "chainfill/manifolds.hpp"
#include "chainfill/registry.hpp"

#include <optional>
#include <string>
#include <vector>

namespace chainfill {

// The registry expressions for the two fillings the source tables spell out
// for every family. The cusp index is validated; by the chain symmetry the
// expression does not depend on it.
ManifoldExpr fill_infinity(const std::string& family, int cusp);
ManifoldExpr fill_zero(const std::string& family, int cusp);

// "a/b,.,c" -> tuple padded with unfilled cusps to the family's cusp count.
std::vector<std::optional<Slope>> parse_filling(const std::string& family,
                                                const std::string& slopes);

struct IdentityReport {
    IdentityRow id;
    AbelianGroup lhs, rhs;
    bool pass = false;
};

// Homology-level verification of a registered identity (full homeomorphism
// checking is out of scope; the report carries both groups).
IdentityReport check_identity(const IdentityRow& id);
std::vector<IdentityReport> check_identities();

}  // namespace chainfill
