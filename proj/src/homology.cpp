#include "chainfill/homology.hpp"

#include "chainfill/notation.hpp"
#include "chainfill/registry.hpp"

#include <stdexcept>

namespace chainfill {

namespace {

using LinkingMatrix = std::vector<std::vector<long long>>;

// Sparse column/coefficient pairs for one port class.
using PortVec = std::vector<std::pair<int, Integer>>;

struct PortClasses {
    PortVec section;  // image of the port's base section
    PortVec fiber;    // image of the port's fiber class
};

struct RelationSystem {
    int cols = 0;
    std::vector<PortVec> rows;  // sparse; columns keep growing as blocks compile
    int extra_free = 0;

    int add_cols(int n) {
        int first = cols;
        cols += n;
        return first;
    }

    void add_row(PortVec entries) { rows.push_back(std::move(entries)); }

    IMat matrix() const {
        IMat m(static_cast<int>(rows.size()), cols);
        for (size_t i = 0; i < rows.size(); ++i)
            for (const auto& [col, coeff] : rows[i]) m.at(static_cast<int>(i), col) += coeff;
        return m;
    }
};

void append_scaled(PortVec& out, const PortVec& v, const Integer& scale) {
    if (scale == 0) return;
    for (const auto& [col, coeff] : v) out.emplace_back(col, coeff * scale);
}

// Gluing relations across matrix [[m,n],[p,q]]: the left port's section and
// fiber classes are carried to (m,n) and (p,q) combinations on the right.
void add_gluing_rows(RelationSystem& sys, const PortClasses& left, const PortClasses& right,
                     Mat2 a, GluingConvention conv) {
    switch (conv) {
        case GluingConvention::standard:
            break;
        case GluingConvention::colvec:
            std::swap(a.b, a.c);
            break;
        case GluingConvention::flipcol:
            a.b = -a.b;
            a.d = -a.d;
            break;
        case GluingConvention::fliprow:
            a.c = -a.c;
            a.d = -a.d;
            break;
    }
    PortVec r1 = left.section;
    append_scaled(r1, right.section, Integer(-a.a));
    append_scaled(r1, right.fiber, Integer(-a.c));
    sys.add_row(r1);

    PortVec r2 = left.fiber;
    append_scaled(r2, right.section, Integer(-a.b));
    append_scaled(r2, right.fiber, Integer(-a.d));
    sys.add_row(r2);
}

std::vector<PortClasses> compile_seifert(RelationSystem& sys, const SeifertBlock& b) {
    int nf = static_cast<int>(b.fibers.size());
    int xf = sys.add_cols(nf);
    int cf = sys.add_cols(b.base.boundary);
    int hcol = sys.add_cols(1);
    int af = 0;
    if (b.base.orientable) {
        sys.extra_free += 2 * b.base.genus;
    } else {
        af = sys.add_cols(b.base.genus);
    }

    for (int k = 0; k < nf; ++k) {
        PortVec rel = {{xf + k, Integer(b.fibers[static_cast<size_t>(k)].p)},
                       {hcol, Integer(b.fibers[static_cast<size_t>(k)].q)}};
        sys.add_row(rel);
    }

    PortVec section;
    for (int k = 0; k < nf; ++k) section.emplace_back(xf + k, Integer(1));
    for (int j = 0; j < b.base.boundary; ++j) section.emplace_back(cf + j, Integer(1));
    if (!b.base.orientable)
        for (int k = 0; k < b.base.genus; ++k) section.emplace_back(af + k, Integer(2));
    sys.add_row(section);

    if (!b.base.orientable) sys.add_row({{hcol, Integer(2)}});

    std::vector<PortClasses> ports(static_cast<size_t>(b.base.boundary));
    for (int j = 0; j < b.base.boundary; ++j) {
        ports[static_cast<size_t>(j)].section = {{cf + j, Integer(1)}};
        ports[static_cast<size_t>(j)].fiber = {{hcol, Integer(1)}};
    }
    return ports;
}

std::vector<PortClasses> compile_named(RelationSystem& sys, const NamedBlock& b,
                                       const LinkingMatrix& linking) {
    int n = static_cast<int>(b.fillings.size());
    int mu = sys.add_cols(n);

    auto longitude = [&](int j) {
        PortVec v;
        for (int k = 0; k < n; ++k)
            if (linking[static_cast<size_t>(j)][static_cast<size_t>(k)] != 0)
                v.emplace_back(mu + k, Integer(linking[static_cast<size_t>(j)][static_cast<size_t>(k)]));
        return v;
    };

    std::vector<PortClasses> ports;
    for (int j = 0; j < n; ++j) {
        const auto& fill = b.fillings[static_cast<size_t>(j)];
        if (fill) {
            PortVec rel = {{mu + j, Integer(fill->p)}};
            append_scaled(rel, longitude(j), Integer(fill->q));
            sys.add_row(rel);
        } else {
            PortClasses pc;
            pc.section = {{mu + j, Integer(1)}};
            pc.fiber = longitude(j);
            ports.push_back(std::move(pc));
        }
    }
    return ports;
}

struct H1Options {
    GluingConvention conv = GluingConvention::standard;
    const LinkingMatrix* linking_override = nullptr;
    std::string override_family;
};

AbelianGroup h1_graph(const GraphManifold& g, const H1Options& opt) {
    PortTable table = compute_ports(g);
    if (!table.errors.empty())
        throw std::invalid_argument("cannot compute homology: " + table.errors.front());

    RelationSystem sys;
    std::vector<std::vector<PortClasses>> ports;
    ports.reserve(g.blocks.size());
    for (const auto& block : g.blocks) {
        if (const auto* s = std::get_if<SeifertBlock>(&block)) {
            ports.push_back(compile_seifert(sys, *s));
        } else {
            const auto& n = std::get<NamedBlock>(block);
            if (opt.linking_override && n.name == opt.override_family) {
                ports.push_back(compile_named(sys, n, *opt.linking_override));
            } else {
                ports.push_back(compile_named(sys, n, Registry::instance().family(n.name).linking_matrix()));
            }
        }
    }

    for (const auto& site : table.sites)
        add_gluing_rows(sys, ports[static_cast<size_t>(site.left.block)][static_cast<size_t>(site.left.port)],
                        ports[static_cast<size_t>(site.right.block)][static_cast<size_t>(site.right.port)],
                        site.m, opt.conv);

    sys.extra_free += static_cast<int>(table.sites.size()) - (static_cast<int>(g.blocks.size()) - 1);

    AbelianGroup core = cokernel(sys.matrix());
    return make_group(core.free + sys.extra_free, core.torsion);
}

AbelianGroup h1_impl(const ManifoldExpr& e, const H1Options& opt) {
    if (const auto* g = std::get_if<GraphManifold>(&e.v)) return h1_graph(*g, opt);
    if (const auto* t = std::get_if<TorusBundle>(&e.v)) {
        IMat m;
        m.rows = 2;
        m.cols = 2;
        m.a = {Integer(t->monodromy.a - 1), Integer(t->monodromy.c), Integer(t->monodromy.b),
               Integer(t->monodromy.d - 1)};
        AbelianGroup core = cokernel(m);
        return make_group(core.free + 1, core.torsion);
    }
    if (const auto* l = std::get_if<LensSpace>(&e.v)) {
        if (l->p == 0) return make_group(1, {});
        return make_group(0, {Integer(l->p)});
    }
    const auto& s = std::get<ConnectedSum>(e.v);
    long long free = 0;
    std::vector<Integer> torsion;
    for (const auto& p : s.parts) {
        AbelianGroup part = h1_impl(p, opt);
        free += part.free;
        torsion.insert(torsion.end(), part.torsion.begin(), part.torsion.end());
    }
    return make_group(free, torsion);
}

}  // namespace

AbelianGroup h1(const ManifoldExpr& e) { return h1_impl(e, H1Options{}); }

AbelianGroup h1_with_convention(const ManifoldExpr& e, GluingConvention conv) {
    H1Options opt;
    opt.conv = conv;
    return h1_impl(e, opt);
}

AbelianGroup h1_filled(const std::string& family,
                       const std::vector<std::optional<Slope>>& slopes) {
    return h1(make_expr(filled_block(family, slopes)));
}

std::vector<std::vector<long long>> calibrate_linking(const std::string& family) {
    const auto& reg = Registry::instance();
    const FamilyInfo& info = reg.family(family);
    size_t edges = cyclic_edges(info.cusps).size();

    std::vector<std::pair<std::vector<std::optional<Slope>>, std::string>> rows;
    for (const auto& row : reg.catalog())
        if (row.family == family) rows.emplace_back(parse_slopes(row.slopes), row.h1);
    if (rows.empty()) throw std::runtime_error("no catalog rows for family " + family);

    std::vector<std::vector<long long>> survivors;
    std::vector<long long> pattern(edges, -1);
    auto matrix_for = [&](const std::vector<long long>& pat) {
        LinkingMatrix m(static_cast<size_t>(info.cusps),
                        std::vector<long long>(static_cast<size_t>(info.cusps), 0));
        auto es = cyclic_edges(info.cusps);
        for (size_t e = 0; e < es.size(); ++e) {
            m[static_cast<size_t>(es[e].first)][static_cast<size_t>(es[e].second)] += pat[e];
            m[static_cast<size_t>(es[e].second)][static_cast<size_t>(es[e].first)] += pat[e];
        }
        return m;
    };

    size_t total = 1;
    for (size_t e = 0; e < edges; ++e) total *= 3;
    for (size_t idx = 0; idx < total; ++idx) {
        size_t rem = idx;
        for (size_t e = 0; e < edges; ++e) {
            pattern[e] = static_cast<long long>(rem % 3) - 1;
            rem /= 3;
        }
        LinkingMatrix m = matrix_for(pattern);
        H1Options opt;
        opt.linking_override = &m;
        opt.override_family = family;
        bool ok = true;
        for (const auto& [slopes, expected] : rows) {
            AbelianGroup got = h1_impl(make_expr(filled_block(family, slopes)), opt);
            if (got.str() != expected) {
                ok = false;
                break;
            }
        }
        if (ok) survivors.push_back(pattern);
    }
    return survivors;
}

}  // namespace chainfill
