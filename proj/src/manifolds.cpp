#include "chainfill/manifolds.hpp"

#include <map>
#include <numeric>

namespace chainfill {

namespace {

const std::map<std::string, int>& cusp_table() {
    static const std::map<std::string, int> t = {
        {"M1", 1}, {"M2", 2}, {"M3", 3}, {"M4", 4}, {"M5", 5},
        {"M6", 6}, {"M7", 7}, {"N3", 3}, {"N4", 4}, {"N5", 5},
        {"N6", 6}, {"W", 3},
    };
    return t;
}

long long gcd_ll(long long a, long long b) {
    return std::gcd(a < 0 ? -a : a, b < 0 ? -b : b);
}

}  // namespace

Slope make_slope(long long p, long long q) {
    long long g = gcd_ll(p, q);
    if (g > 1) {
        p /= g;
        q /= g;
    }
    if (q < 0) {
        p = -p;
        q = -q;
    }
    if (q == 0 && p != 0) p = 1;
    return Slope{p, q};
}

std::string slope_str(const Slope& s) {
    if (s.q == 0) return "inf";
    if (s.q == 1) return std::to_string(s.p);
    return std::to_string(s.p) + "/" + std::to_string(s.q);
}

bool ConnectedSum::operator==(const ConnectedSum& o) const { return parts == o.parts; }

ManifoldExpr make_expr(GraphManifold g) { return ManifoldExpr{std::move(g)}; }
ManifoldExpr make_expr(TorusBundle t) { return ManifoldExpr{std::move(t)}; }
ManifoldExpr make_expr(LensSpace l) { return ManifoldExpr{std::move(l)}; }
ManifoldExpr make_expr(ConnectedSum s) { return ManifoldExpr{std::move(s)}; }

GraphManifold solid_torus() {
    GraphManifold g;
    g.blocks.push_back(SeifertBlock{kDisc, {}});
    return g;
}

GraphManifold filled_block(const std::string& family,
                           const std::vector<std::optional<Slope>>& fillings) {
    NamedBlock b;
    b.name = family;
    b.fillings = fillings;
    b.fillings.resize(static_cast<size_t>(cusp_count(family)), std::nullopt);
    GraphManifold g;
    g.blocks.push_back(std::move(b));
    return g;
}

int cusp_count(const std::string& family) {
    auto it = cusp_table().find(family);
    return it == cusp_table().end() ? 0 : it->second;
}

bool known_family(const std::string& family) {
    return cusp_table().count(family) > 0;
}

int PortTable::free_ports() const {
    int total = 0;
    for (size_t i = 0; i < capacity.size(); ++i) total += capacity[i] - used[i];
    return total;
}

namespace {

int block_capacity(const Block& b) {
    if (const auto* s = std::get_if<SeifertBlock>(&b)) return s->base.boundary;
    const auto& n = std::get<NamedBlock>(b);
    int free = 0;
    for (const auto& f : n.fillings)
        if (!f) ++free;
    return free;
}

}  // namespace

PortTable compute_ports(const GraphManifold& g) {
    PortTable t;
    t.capacity.reserve(g.blocks.size());
    for (const auto& b : g.blocks) t.capacity.push_back(block_capacity(b));
    t.used.assign(g.blocks.size(), 0);

    auto take = [&](int block, int junction) -> PortRef {
        if (t.used[block] >= t.capacity[block]) {
            t.errors.push_back("block " + std::to_string(block) +
                               " has no free port for junction " + std::to_string(junction));
            return PortRef{block, -1};
        }
        return PortRef{block, t.used[block]++};
    };

    for (size_t j = 0; j < g.junctions.size(); ++j) {
        for (const Mat2& m : g.junctions[j]) {
            GluingSite site;
            site.left = take(static_cast<int>(j), static_cast<int>(j));
            site.right = take(static_cast<int>(j) + 1, static_cast<int>(j));
            site.m = m;
            t.sites.push_back(site);
        }
    }

    if (g.self_gluing) {
        std::vector<PortRef> free;
        for (size_t b = 0; b < g.blocks.size(); ++b)
            for (int p = t.used[b]; p < t.capacity[b]; ++p)
                free.push_back(PortRef{static_cast<int>(b), p});
        if (free.size() < 2) {
            t.errors.push_back("self-gluing needs two free ports, found " +
                               std::to_string(free.size()));
        } else {
            GluingSite site;
            site.left = free[0];
            site.right = free[1];
            site.m = *g.self_gluing;
            site.self = true;
            t.sites.push_back(site);
            ++t.used[free[0].block];
            ++t.used[free[1].block];
        }
    }
    return t;
}

namespace {

void validate_graph(const GraphManifold& g, std::vector<std::string>& out) {
    if (g.blocks.empty()) {
        out.push_back("chain has no blocks");
        return;
    }
    if (g.junctions.size() + 1 != g.blocks.size())
        out.push_back("chain with " + std::to_string(g.blocks.size()) + " blocks has " +
                      std::to_string(g.junctions.size()) + " junctions");

    for (size_t i = 0; i < g.blocks.size(); ++i) {
        if (const auto* s = std::get_if<SeifertBlock>(&g.blocks[i])) {
            const auto& base = s->base;
            if (base.boundary < 0)
                out.push_back("block " + std::to_string(i) + " has negative boundary count");
            if (base.genus < (base.orientable ? 0 : 1))
                out.push_back("block " + std::to_string(i) + " has invalid genus");
            for (const auto& f : s->fibers)
                if (gcd_ll(f.p, f.q) != 1)
                    out.push_back("block " + std::to_string(i) + " has non-coprime fiber (" +
                                  std::to_string(f.p) + "," + std::to_string(f.q) + ")");
        } else {
            const auto& n = std::get<NamedBlock>(g.blocks[i]);
            if (!known_family(n.name)) {
                out.push_back("block " + std::to_string(i) + " names unknown family " + n.name);
                continue;
            }
            if (n.fillings.size() != static_cast<size_t>(cusp_count(n.name)))
                out.push_back("block " + std::to_string(i) + " fills " +
                              std::to_string(n.fillings.size()) + " cusps, " + n.name + " has " +
                              std::to_string(cusp_count(n.name)));
            for (const auto& f : n.fillings)
                if (f && gcd_ll(f->p, f->q) != 1)
                    out.push_back("block " + std::to_string(i) + " has non-reduced filling " +
                                  std::to_string(f->p) + "/" + std::to_string(f->q));
        }
    }

    for (size_t j = 0; j < g.junctions.size(); ++j) {
        if (g.junctions[j].empty() || g.junctions[j].size() > 2)
            out.push_back("junction " + std::to_string(j) + " carries " +
                          std::to_string(g.junctions[j].size()) + " matrices");
        for (const Mat2& m : g.junctions[j])
            if (m.det() != -1)
                out.push_back("gluing matrix " + m.str() + " has determinant " +
                              std::to_string(m.det()) + ", expected -1");
    }
    if (g.self_gluing && g.self_gluing->det() != -1)
        out.push_back("self-gluing matrix " + g.self_gluing->str() + " has determinant " +
                      std::to_string(g.self_gluing->det()) + ", expected -1");

    PortTable t = compute_ports(g);
    out.insert(out.end(), t.errors.begin(), t.errors.end());
}

}  // namespace

std::vector<std::string> validate(const ManifoldExpr& e) {
    std::vector<std::string> out;
    if (const auto* g = std::get_if<GraphManifold>(&e.v)) {
        validate_graph(*g, out);
    } else if (const auto* t = std::get_if<TorusBundle>(&e.v)) {
        if (t->monodromy.det() != 1)
            out.push_back("torus bundle monodromy " + t->monodromy.str() + " has determinant " +
                          std::to_string(t->monodromy.det()) + ", expected 1");
    } else if (const auto* l = std::get_if<LensSpace>(&e.v)) {
        if (gcd_ll(l->p, l->q) != 1)
            out.push_back("lens space parameters (" + std::to_string(l->p) + "," +
                          std::to_string(l->q) + ") are not coprime");
    } else {
        const auto& s = std::get<ConnectedSum>(e.v);
        if (s.parts.size() < 2)
            out.push_back("connected sum with " + std::to_string(s.parts.size()) + " part(s)");
        for (const auto& p : s.parts) {
            auto sub = validate(p);
            out.insert(out.end(), sub.begin(), sub.end());
        }
    }
    return out;
}

int free_boundary_count(const ManifoldExpr& e) {
    if (const auto* g = std::get_if<GraphManifold>(&e.v)) {
        return compute_ports(*g).free_ports();
    }
    if (const auto* s = std::get_if<ConnectedSum>(&e.v)) {
        int total = 0;
        for (const auto& p : s->parts) total += free_boundary_count(p);
        return total;
    }
    return 0;
}

}  // namespace chainfill
