#include "chainfill/chains.hpp"

#include "chainfill/homology.hpp"
#include "chainfill/notation.hpp"

#include <stdexcept>

namespace chainfill {

static void check_cusp(const FamilyInfo& f, int cusp) {
    if (cusp < 0 || cusp >= f.cusps)
        throw std::invalid_argument("cusp " + std::to_string(cusp) + " out of range for " +
                                    f.name);
}

ManifoldExpr fill_infinity(const std::string& family, int cusp) {
    const FamilyInfo& f = Registry::instance().family(family);
    check_cusp(f, cusp);
    return parse_expr(f.fill_infinity);
}

ManifoldExpr fill_zero(const std::string& family, int cusp) {
    const FamilyInfo& f = Registry::instance().family(family);
    check_cusp(f, cusp);
    return parse_expr(f.fill_zero);
}

std::vector<std::optional<Slope>> parse_filling(const std::string& family,
                                                const std::string& slopes) {
    const FamilyInfo& f = Registry::instance().family(family);
    std::vector<std::optional<Slope>> t =
        slopes.empty() ? std::vector<std::optional<Slope>>{} : parse_slopes(slopes);
    if (static_cast<int>(t.size()) > f.cusps)
        throw std::invalid_argument("tuple longer than the " + std::to_string(f.cusps) +
                                    " cusps of " + family);
    t.resize(f.cusps, std::nullopt);
    return t;
}

IdentityReport check_identity(const IdentityRow& id) {
    IdentityReport r;
    r.id = id;
    r.lhs = h1_filled(id.lhs_family, parse_filling(id.lhs_family, id.lhs_slopes));
    r.rhs = h1_filled(id.rhs_family, parse_filling(id.rhs_family, id.rhs_slopes));
    r.pass = abelian_iso(r.lhs, r.rhs);
    return r;
}

std::vector<IdentityReport> check_identities() {
    std::vector<IdentityReport> out;
    for (const IdentityRow& id : Registry::instance().identities())
        out.push_back(check_identity(id));
    return out;
}

}  // namespace chainfill
