#pragma once

#include "chainfill/exactalg.hpp"
#include "chainfill/manifolds.hpp"

#include <optional>
#include <string>
#include <vector>

namespace chainfill {

// How gluing matrices act on port bases when assembling relations. The
// standard convention pairs (section, fiber) row vectors; the others exist to
// demonstrate that the calibration anchors reject them.
enum class GluingConvention { standard, colvec, flipcol, fliprow };

AbelianGroup h1(const ManifoldExpr& e);
AbelianGroup h1_with_convention(const ManifoldExpr& e, GluingConvention conv);

// First homology of the named chain-link exterior with the given fillings.
AbelianGroup h1_filled(const std::string& family,
                       const std::vector<std::optional<Slope>>& slopes);

// Re-derives the per-edge linking signs of a family from its catalog rows:
// every pattern in {-1,0,1}^edges is scored against all rows and the
// survivors are returned. Flipping a meridian negates both incident edge
// signs without changing any filled homology, so on an n-cycle the registry
// pattern sits in a gauge orbit of 2^(n-1) survivors; for one- and two-cusp
// chains and for W the survivor is unique.
std::vector<std::vector<long long>> calibrate_linking(const std::string& family);

}  // namespace chainfill
