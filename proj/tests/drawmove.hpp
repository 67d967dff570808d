#pragma once

// Draws a (expression, applicable move) pair for the given move id, or
// nothing when the random shape offers no site. Shared by the move property
// tests and the acceptance run.

#include "chainfill/manifolds.hpp"
#include "chainfill/moves.hpp"
#include "gen.hpp"

#include <optional>
#include <utility>

namespace chainfill::testgen {

inline std::optional<std::pair<ManifoldExpr, MoveId>> draw_move(Rng& rng, int id) {
    switch (id) {
        case 1: {
            GenOptions o;
            o.allow_self = true;
            return {{make_expr(random_chain(rng, o)), MoveId{.id = 1}}};
        }
        case 2: {
            GenOptions o;
            o.allow_self = true;
            o.allow_named = true;
            GraphManifold g = random_chain(rng, o);
            std::vector<int> bs;
            for (size_t i = 0; i < g.blocks.size(); ++i) {
                const auto* s = std::get_if<SeifertBlock>(&g.blocks[i]);
                if (s && s->fibers.size() >= 2) bs.push_back(static_cast<int>(i));
            }
            if (bs.empty()) return std::nullopt;
            int b = bs[rint(rng, 0, static_cast<long long>(bs.size()) - 1)];
            int nf = static_cast<int>(std::get<SeifertBlock>(g.blocks[b]).fibers.size());
            int f1 = static_cast<int>(rint(rng, 0, nf - 1));
            int f2 = (f1 + 1 + static_cast<int>(rint(rng, 0, nf - 2))) % nf;
            return {{make_expr(std::move(g)),
                     MoveId{.id = 2, .block = b, .fiber = f1, .fiber2 = f2,
                            .k = rint(rng, -3, 3)}}};
        }
        case 3: {
            GenOptions o;
            o.allow_self = true;
            o.allow_named = true;
            GraphManifold g = random_chain(rng, o);
            PortTable t = compute_ports(g);
            if (!t.errors.empty()) return std::nullopt;
            std::vector<int> bs;
            for (size_t i = 0; i < g.blocks.size(); ++i) {
                const auto* s = std::get_if<SeifertBlock>(&g.blocks[i]);
                if (s && !s->fibers.empty() && t.capacity[i] > t.used[i])
                    bs.push_back(static_cast<int>(i));
            }
            if (bs.empty()) return std::nullopt;
            int b = bs[rint(rng, 0, static_cast<long long>(bs.size()) - 1)];
            int nf = static_cast<int>(std::get<SeifertBlock>(g.blocks[b]).fibers.size());
            return {{make_expr(std::move(g)),
                     MoveId{.id = 3, .block = b, .fiber = static_cast<int>(rint(rng, 0, nf - 1)),
                            .k = rint(rng, -3, 3)}}};
        }
        case 4: {
            GenOptions o;
            o.allow_self = true;
            o.allow_named = true;
            GraphManifold g = random_chain(rng, o);
            std::vector<int> bs;
            for (size_t i = 0; i < g.blocks.size(); ++i)
                if (std::holds_alternative<SeifertBlock>(g.blocks[i]))
                    bs.push_back(static_cast<int>(i));
            if (bs.empty()) return std::nullopt;
            int b = bs[rint(rng, 0, static_cast<long long>(bs.size()) - 1)];
            int nf = static_cast<int>(std::get<SeifertBlock>(g.blocks[b]).fibers.size());
            return {{make_expr(std::move(g)),
                     MoveId{.id = 4, .block = b, .fiber = static_cast<int>(rint(rng, 0, nf)),
                            .add = true}}};
        }
        case 5: {
            GenOptions o;
            o.allow_named = true;
            GraphManifold g = random_chain(rng, o);
            if (g.blocks.size() < 2) return std::nullopt;
            std::vector<int> bridges;
            int site = 0;
            for (const auto& stack : g.junctions) {
                if (stack.size() == 1) bridges.push_back(site);
                site += static_cast<int>(stack.size());
            }
            if (bridges.empty()) return std::nullopt;
            int si = bridges[rint(rng, 0, static_cast<long long>(bridges.size()) - 1)];
            return {{make_expr(std::move(g)), MoveId{.id = 5, .gluing = si}}};
        }
        case 6:
        case 7: {
            GenOptions o;
            o.allow_self = true;
            o.allow_named = true;
            GraphManifold g = random_chain(rng, o);
            PortTable t = compute_ports(g);
            if (!t.errors.empty()) return std::nullopt;
            std::vector<int> sites;
            for (size_t si = 0; si < t.sites.size(); ++si) {
                int b = id == 6 ? t.sites[si].left.block : t.sites[si].right.block;
                const auto* s = std::get_if<SeifertBlock>(&g.blocks[b]);
                if (s && !s->fibers.empty()) sites.push_back(static_cast<int>(si));
            }
            if (sites.empty()) return std::nullopt;
            int si = sites[rint(rng, 0, static_cast<long long>(sites.size()) - 1)];
            int b = id == 6 ? t.sites[si].left.block : t.sites[si].right.block;
            int nf = static_cast<int>(std::get<SeifertBlock>(g.blocks[b]).fibers.size());
            return {{make_expr(std::move(g)),
                     MoveId{.id = id, .fiber = static_cast<int>(rint(rng, 0, nf - 1)),
                            .gluing = si, .k = rint(rng, -3, 3)}}};
        }
        case 8:
        case 9: {
            GenOptions o;
            o.allow_named = true;
            o.max_blocks = 3;
            GraphManifold g = random_chain(rng, o);
            if (g.blocks.size() < 2) return std::nullopt;
            bool add = rint(rng, 0, 1) == 1;
            Block special = add ? Block{SeifertBlock{kMoebius, {}}}
                                : Block{SeifertBlock{kDisc, {FiberPair{2, 1}, FiberPair{2, 1}}}};
            if (id == 8) {
                if (g.junctions[0].size() != 1) return std::nullopt;
                g.blocks[0] = special;
                return {{make_expr(std::move(g)), MoveId{.id = 8, .gluing = 0, .add = add}}};
            }
            if (g.junctions.back().size() != 1) return std::nullopt;
            g.blocks.back() = special;
            int sites = 0;
            for (size_t j = 0; j + 1 < g.junctions.size(); ++j)
                sites += static_cast<int>(g.junctions[j].size());
            return {{make_expr(std::move(g)), MoveId{.id = 9, .gluing = sites, .add = add}}};
        }
        case 10: {
            SeifertBlock s;
            s.base = BaseSurface{true, static_cast<int>(rint(rng, 0, 1)),
                                 static_cast<int>(rint(rng, 0, 2))};
            int nf = static_cast<int>(rint(rng, 0, 3));
            for (int i = 0; i < nf; ++i) s.fibers.push_back(random_fiber(rng, true));
            int pos = static_cast<int>(rint(rng, 0, static_cast<long long>(s.fibers.size())));
            s.fibers.insert(s.fibers.begin() + pos, FiberPair{0, rint(rng, 0, 1) ? 1 : -1});
            GraphManifold g;
            g.blocks.push_back(s);
            return {{make_expr(std::move(g)), MoveId{.id = 10, .block = 0, .fiber = pos}}};
        }
        case 11: {
            GenOptions o;
            o.allow_named = true;
            o.allow_self = true;
            GraphManifold g = random_chain(rng, o);
            if (g.blocks.size() < 2) return std::nullopt;
            bool front = rint(rng, 0, 1) == 0;
            int end = front ? 0 : static_cast<int>(g.blocks.size()) - 1;
            if ((front ? g.junctions.front() : g.junctions.back()).size() != 1)
                return std::nullopt;
            PortTable t0 = compute_ports(g);
            if (!t0.errors.empty()) return std::nullopt;
            if (t0.capacity[end] != t0.used[end]) return std::nullopt;
            FiberPair other = random_fiber(rng, true);
            FiberPair zero{0, rint(rng, 0, 1) ? 1 : -1};
            std::vector<FiberPair> fs =
                rint(rng, 0, 1) ? std::vector<FiberPair>{zero, other}
                                : std::vector<FiberPair>{other, zero};
            g.blocks[end] = SeifertBlock{kDisc, fs};
            PortTable t = compute_ports(g);
            if (!t.errors.empty()) return std::nullopt;
            int si = -1;
            for (size_t k = 0; k < t.sites.size(); ++k)
                if (!t.sites[k].self &&
                    (t.sites[k].left.block == end || t.sites[k].right.block == end))
                    si = static_cast<int>(k);
            if (si < 0) return std::nullopt;
            return {{make_expr(std::move(g)), MoveId{.id = 11, .block = end, .gluing = si}}};
        }
    }
    return std::nullopt;
}

}  // namespace chainfill::testgen
