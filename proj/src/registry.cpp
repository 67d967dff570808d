#include "chainfill/registry.hpp"

#include "json.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

#ifndef CHAINFILL_DATA_DIR
#define CHAINFILL_DATA_DIR "data"
#endif

namespace chainfill {

std::vector<std::pair<int, int>> cyclic_edges(int n) {
    if (n <= 1) return {};
    if (n == 2) return {{0, 1}};
    std::vector<std::pair<int, int>> edges;
    edges.reserve(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) edges.emplace_back(i, (i + 1) % n);
    return edges;
}

std::vector<std::vector<long long>> FamilyInfo::linking_matrix() const {
    std::vector<std::vector<long long>> m(static_cast<size_t>(cusps),
                                          std::vector<long long>(static_cast<size_t>(cusps), 0));
    auto edges = cyclic_edges(cusps);
    if (edges.size() != linking.size())
        throw std::runtime_error("family " + name + " has " + std::to_string(linking.size()) +
                                 " linking entries for " + std::to_string(edges.size()) + " edges");
    for (size_t e = 0; e < edges.size(); ++e) {
        auto [a, b] = edges[e];
        m[a][b] += linking[e];
        m[b][a] += linking[e];
    }
    return m;
}

namespace {

using Json = nlohmann::json;

Slope slope_from_json(const Json& j) {
    return make_slope(j.at(0).get<long long>(), j.at(1).get<long long>());
}

Mat2 mat_from_json(const Json& j) {
    Mat2 m;
    m.a = j.at(0).at(0).get<long long>();
    m.b = j.at(0).at(1).get<long long>();
    m.c = j.at(1).at(0).get<long long>();
    m.d = j.at(1).at(1).get<long long>();
    return m;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open data file " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

}  // namespace

Registry::Registry() {
    if (const char* env = std::getenv("CHAINFILL_DATA"))
        data_dir_ = env;
    else
        data_dir_ = CHAINFILL_DATA_DIR;

    Json root = Json::parse(read_file(data_dir_ + "/families.json"));

    for (const auto& [name, f] : root.at("families").items()) {
        FamilyInfo info;
        info.name = name;
        info.cusps = f.at("cusps").get<int>();
        if (info.cusps != cusp_count(name))
            throw std::runtime_error("family " + name + " cusp count mismatch");
        for (const auto& v : f.at("linking")) info.linking.push_back(v.get<long long>());
        for (const auto& s : f.at("factor").at("slopes"))
            info.factor.slopes.push_back(slope_from_json(s));
        if (f.at("factor").contains("consecutive_pair"))
            info.factor.consecutive_pair = slope_from_json(f.at("factor").at("consecutive_pair"));
        info.fill_infinity = f.at("fill_infinity").get<std::string>();
        info.fill_zero = f.at("fill_zero").get<std::string>();
        if (!f.at("isom_order").is_null()) info.isom_order = f.at("isom_order").get<long long>();
        if (!f.at("isom_group").is_null()) info.isom_group = f.at("isom_group").get<std::string>();
        info.volume = f.at("volume").get<double>();

        const auto& sym = f.at("symmetry");
        info.symmetry.declared_order = sym.at("declared_order").get<long long>();
        info.symmetry.generators_complete = sym.at("generators_complete").get<bool>();
        for (const auto& g : sym.at("generators")) {
            SymmetryGenerator gen;
            gen.name = g.at("name").get<std::string>();
            for (const auto& p : g.at("perm")) gen.perm.push_back(p.get<int>());
            if (gen.perm.size() != static_cast<size_t>(info.cusps))
                throw std::runtime_error("family " + name + " generator " + gen.name +
                                         " has wrong permutation size");
            info.symmetry.generators.push_back(std::move(gen));
        }
        if (sym.contains("slope_maps"))
            for (const auto& [key, m] : sym.at("slope_maps").items())
                info.symmetry.slope_maps[key] = mat_from_json(m);

        info.linking_matrix();  // validates edge count
        families_.emplace(name, std::move(info));
    }

    for (const auto& i : root.at("identities")) {
        IdentityRow row;
        row.lhs_family = i.at("lhs_family").get<std::string>();
        row.lhs_slopes = i.at("lhs_slopes").get<std::string>();
        row.rhs_family = i.at("rhs_family").get<std::string>();
        row.rhs_slopes = i.at("rhs_slopes").get<std::string>();
        identities_.push_back(std::move(row));
    }

    for (const auto& [table, count] : root.at("table_row_counts").items())
        table_row_counts_[std::stoi(table)] = count.get<int>();

    std::istringstream tsv(read_file(data_dir_ + "/catalog.tsv"));
    std::string line;
    size_t lineno = 0;
    while (std::getline(tsv, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        CatalogRow row;
        std::istringstream fields(line);
        std::string table;
        if (!std::getline(fields, row.family, '|') || !std::getline(fields, table, '|') ||
            !std::getline(fields, row.slopes, '|') || !std::getline(fields, row.expr, '|') ||
            !std::getline(fields, row.h1))
            throw std::runtime_error("catalog.tsv line " + std::to_string(lineno) +
                                     ": expected 5 pipe-separated fields");
        row.table = std::stoi(table);
        catalog_.push_back(std::move(row));
    }
}

const Registry& Registry::instance() {
    static Registry reg;
    return reg;
}

const FamilyInfo& Registry::family(const std::string& name) const {
    auto it = families_.find(name);
    if (it == families_.end()) throw std::runtime_error("unknown family " + name);
    return it->second;
}

bool Registry::has_family(const std::string& name) const { return families_.count(name) > 0; }

}  // namespace chainfill
