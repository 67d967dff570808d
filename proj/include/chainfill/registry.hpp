#pragma once

#include "chainfill/manifolds.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace chainfill {

struct SymmetryGenerator {
    std::string name;
    std::vector<int> perm;
};

struct FamilySymmetry {
    long long declared_order = 1;
    std::vector<SymmetryGenerator> generators;
    bool generators_complete = true;
    std::map<std::string, Mat2> slope_maps;  // auxiliary projective slope actions
};

struct FactorRule {
    std::vector<Slope> slopes;                 // filling any cusp with one of these factors
    std::optional<Slope> consecutive_pair;     // pair on cyclically adjacent cusps factors
};

struct FamilyInfo {
    std::string name;
    int cusps = 0;
    std::vector<long long> linking;  // linking number per cyclic edge
    FactorRule factor;
    std::string fill_infinity;
    std::string fill_zero;
    std::optional<long long> isom_order;
    std::optional<std::string> isom_group;
    double volume = 0.0;
    FamilySymmetry symmetry;

    // Full symmetric pairwise linking matrix, zero diagonal.
    std::vector<std::vector<long long>> linking_matrix() const;
};

struct IdentityRow {
    std::string lhs_family, lhs_slopes;
    std::string rhs_family, rhs_slopes;
};

struct CatalogRow {
    std::string family;
    int table = 0;
    std::string slopes;
    std::string expr;
    std::string h1;
};

// Loads families.json and catalog.tsv from $CHAINFILL_DATA if set, otherwise
// from the build-time default directory. Throws std::runtime_error on
// missing or malformed data.
class Registry {
  public:
    static const Registry& instance();

    const FamilyInfo& family(const std::string& name) const;
    bool has_family(const std::string& name) const;
    const std::map<std::string, FamilyInfo>& families() const { return families_; }
    const std::vector<IdentityRow>& identities() const { return identities_; }
    const std::vector<CatalogRow>& catalog() const { return catalog_; }
    const std::map<int, int>& table_row_counts() const { return table_row_counts_; }
    const std::string& data_dir() const { return data_dir_; }

  private:
    Registry();

    std::map<std::string, FamilyInfo> families_;
    std::vector<IdentityRow> identities_;
    std::vector<CatalogRow> catalog_;
    std::map<int, int> table_row_counts_;
    std::string data_dir_;
};

// Cyclic adjacency edges of an n-cusp chain: none for n=1, a single edge for
// n=2, the n-cycle for n>=3.
std::vector<std::pair<int, int>> cyclic_edges(int n);

}  // namespace chainfill
