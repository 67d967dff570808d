#include "chainfill/notation.hpp"

#include "json.hpp"

#include <cctype>
#include <map>

namespace chainfill {

namespace {

struct Parser {
    std::string s;
    size_t i = 0;

    explicit Parser(const std::string& text) {
        s.reserve(text.size());
        for (char c : text)
            if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
    }

    [[noreturn]] void fail(const std::string& what) const { throw ParseError(what, i); }

    bool done() const { return i >= s.size(); }
    char peek() const { return done() ? '\0' : s[i]; }
    bool peek_is(char c) const { return peek() == c; }

    bool eat(char c) {
        if (!peek_is(c)) return false;
        ++i;
        return true;
    }

    void expect(char c) {
        if (!eat(c)) fail(std::string("expected '") + c + "'");
    }

    bool starts_with(const std::string& w) const { return s.compare(i, w.size(), w) == 0; }

    long long integer() {
        size_t start = i;
        if (peek_is('-')) ++i;
        size_t digits = i;
        while (!done() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
        if (i == digits) {
            i = start;
            fail("expected integer");
        }
        return std::stoll(s.substr(start, i - start));
    }

    std::string ident() {
        size_t start = i;
        while (!done() && (std::isalnum(static_cast<unsigned char>(s[i])))) ++i;
        if (i == start) fail("expected block name");
        return s.substr(start, i - start);
    }

    Mat2 matrix() {
        expect('[');
        Mat2 m;
        m.a = integer();
        expect(',');
        m.b = integer();
        expect(';');
        m.c = integer();
        expect(',');
        m.d = integer();
        expect(']');
        return m;
    }

    BaseSurface base() {
        if (eat('(')) {
            BaseSurface b;
            b.genus = static_cast<int>(integer());
            expect(',');
            if (starts_with("nonor")) {
                i += 5;
                b.orientable = false;
            } else if (starts_with("or")) {
                i += 2;
                b.orientable = true;
            } else {
                fail("expected 'or' or 'nonor'");
            }
            expect(',');
            b.boundary = static_cast<int>(integer());
            expect(')');
            return b;
        }
        static const std::map<std::string, BaseSurface> aliases = {
            {"S2", kS2}, {"D", kDisc}, {"A", kAnnulus}, {"P", kPants},
            {"RP2", kRP2}, {"Mb", kMoebius}, {"K", kKlein},
        };
        std::string name = ident();
        auto it = aliases.find(name);
        if (it == aliases.end()) fail("unknown base surface '" + name + "'");
        return it->second;
    }

    SeifertBlock seifert() {
        i += 4;  // "SFS("
        SeifertBlock b;
        b.base = base();
        expect(';');
        while (peek_is('(')) {
            expect('(');
            FiberPair f;
            f.p = integer();
            expect(',');
            f.q = integer();
            expect(')');
            b.fibers.push_back(f);
            if (!eat(',')) break;
        }
        expect(')');
        return b;
    }

    std::optional<Slope> slope() {
        if (eat('.')) return std::nullopt;
        if (starts_with("inf")) {
            i += 3;
            return Slope{1, 0};
        }
        long long p = integer();
        if (eat('/')) return make_slope(p, integer());
        return make_slope(p, 1);
    }

    NamedBlock named(std::string name) {
        NamedBlock b;
        b.name = std::move(name);
        if (eat('(')) {
            b.fillings.push_back(slope());
            while (eat(',')) b.fillings.push_back(slope());
            expect(')');
        }
        int cusps = cusp_count(b.name);
        if (b.fillings.size() > static_cast<size_t>(cusps))
            fail(b.name + " has " + std::to_string(cusps) + " cusps, got " +
                 std::to_string(b.fillings.size()) + " slopes");
        b.fillings.resize(static_cast<size_t>(cusps), std::nullopt);
        return b;
    }

    // An atom is either a chain piece or a standalone closed manifold.
    struct Atom {
        std::optional<Block> block;
        std::optional<ManifoldExpr> closed;
    };

    Atom atom() {
        Atom a;
        if (starts_with("SFS(")) {
            a.block = Block{seifert()};
            return a;
        }
        if (starts_with("TB[")) {
            i += 2;
            a.closed = make_expr(TorusBundle{matrix()});
            return a;
        }
        if (starts_with("L(")) {
            i += 2;
            LensSpace l;
            l.p = integer();
            expect(',');
            l.q = integer();
            expect(')');
            a.closed = make_expr(l);
            return a;
        }
        size_t start = i;
        std::string name = ident();
        if (name == "DxS1") {
            a.block = Block{SeifertBlock{kDisc, {}}};
        } else if (name == "AxS1") {
            a.block = Block{SeifertBlock{kAnnulus, {}}};
        } else if (name == "PxS1") {
            a.block = Block{SeifertBlock{kPants, {}}};
        } else if (name == "MbxS1") {
            a.block = Block{SeifertBlock{kMoebius, {}}};
        } else if (name == "S3") {
            a.closed = make_expr(LensSpace{1, 0});
        } else if (name == "S2xS1") {
            a.closed = make_expr(LensSpace{0, 1});
        } else if (name == "RP3") {
            a.closed = make_expr(LensSpace{2, 1});
        } else if (known_family(name)) {
            a.block = Block{named(name)};
        } else {
            i = start;
            fail("unknown block name '" + name + "'");
        }
        return a;
    }

    ManifoldExpr part() {
        Atom first = atom();
        if (first.closed) {
            if (peek_is('=') || peek_is('/')) fail("closed manifold cannot be glued");
            return *first.closed;
        }
        GraphManifold g;
        g.blocks.push_back(std::move(*first.block));
        while (eat('=')) {
            std::vector<Mat2> stack;
            if (!peek_is('[')) fail("expected gluing matrix");
            while (peek_is('[')) stack.push_back(matrix());
            expect('=');
            g.junctions.push_back(std::move(stack));
            Atom next = atom();
            if (next.closed) fail("closed manifold cannot be glued");
            g.blocks.push_back(std::move(*next.block));
        }
        if (eat('/')) {
            if (!peek_is('[')) fail("expected self-gluing matrix");
            g.self_gluing = matrix();
        }
        return make_expr(std::move(g));
    }

    ManifoldExpr expr() {
        std::vector<ManifoldExpr> parts;
        parts.push_back(part());
        while (eat('#')) parts.push_back(part());
        if (!done()) fail("unexpected trailing input");
        if (parts.size() == 1) return std::move(parts[0]);
        ConnectedSum sum;
        sum.parts = std::move(parts);
        return make_expr(std::move(sum));
    }
};

std::string base_str(const BaseSurface& b) {
    if (b == kS2) return "S2";
    if (b == kDisc) return "D";
    if (b == kAnnulus) return "A";
    if (b == kPants) return "P";
    if (b == kRP2) return "RP2";
    if (b == kMoebius) return "Mb";
    if (b == kKlein) return "K";
    return "(" + std::to_string(b.genus) + "," + (b.orientable ? "or" : "nonor") + "," +
           std::to_string(b.boundary) + ")";
}

std::string block_str(const Block& block) {
    if (const auto* s = std::get_if<SeifertBlock>(&block)) {
        if (s->fibers.empty()) {
            if (s->base == kDisc) return "DxS1";
            if (s->base == kAnnulus) return "AxS1";
            if (s->base == kPants) return "PxS1";
            if (s->base == kMoebius) return "MbxS1";
        }
        std::string out = "SFS(" + base_str(s->base) + ";";
        for (size_t k = 0; k < s->fibers.size(); ++k) {
            if (k) out += ",";
            out += "(" + std::to_string(s->fibers[k].p) + "," + std::to_string(s->fibers[k].q) + ")";
        }
        return out + ")";
    }
    const auto& n = std::get<NamedBlock>(block);
    size_t last = n.fillings.size();
    while (last > 0 && !n.fillings[last - 1]) --last;
    if (last == 0) return n.name;
    std::string out = n.name + "(";
    for (size_t k = 0; k < last; ++k) {
        if (k) out += ",";
        out += n.fillings[k] ? slope_str(*n.fillings[k]) : ".";
    }
    return out + ")";
}

std::string graph_str(const GraphManifold& g) {
    std::string out = block_str(g.blocks[0]);
    for (size_t j = 0; j < g.junctions.size(); ++j) {
        out += "=";
        for (const Mat2& m : g.junctions[j]) out += m.str();
        out += "=" + block_str(g.blocks[j + 1]);
    }
    if (g.self_gluing) out += "/" + g.self_gluing->str();
    return out;
}

using Json = nlohmann::ordered_json;

Json mat_json(const Mat2& m) {
    return Json::array({Json::array({m.a, m.b}), Json::array({m.c, m.d})});
}

Json block_json(const Block& block) {
    Json j;
    if (const auto* s = std::get_if<SeifertBlock>(&block)) {
        j["type"] = "seifert";
        j["base"] = {{"orientable", s->base.orientable},
                     {"genus", s->base.genus},
                     {"boundary", s->base.boundary}};
        j["fibers"] = Json::array();
        for (const auto& f : s->fibers) j["fibers"].push_back(Json::array({f.p, f.q}));
    } else {
        const auto& n = std::get<NamedBlock>(block);
        j["type"] = "named";
        j["name"] = n.name;
        j["fillings"] = Json::array();
        for (const auto& f : n.fillings) {
            if (f)
                j["fillings"].push_back(Json::array({f->p, f->q}));
            else
                j["fillings"].push_back(nullptr);
        }
    }
    return j;
}

Json expr_json(const ManifoldExpr& e) {
    Json j;
    if (const auto* g = std::get_if<GraphManifold>(&e.v)) {
        j["type"] = "chain";
        j["blocks"] = Json::array();
        for (const auto& b : g->blocks) j["blocks"].push_back(block_json(b));
        j["gluings"] = Json::array();
        for (const auto& stack : g->junctions) {
            Json s = Json::array();
            for (const Mat2& m : stack) s.push_back(mat_json(m));
            j["gluings"].push_back(s);
        }
        j["self_gluing"] = g->self_gluing ? mat_json(*g->self_gluing) : Json(nullptr);
    } else if (const auto* t = std::get_if<TorusBundle>(&e.v)) {
        j["type"] = "tb";
        j["matrix"] = mat_json(t->monodromy);
    } else if (const auto* l = std::get_if<LensSpace>(&e.v)) {
        j["type"] = "lens";
        j["p"] = l->p;
        j["q"] = l->q;
    } else {
        const auto& s = std::get<ConnectedSum>(e.v);
        j["type"] = "sum";
        j["parts"] = Json::array();
        for (const auto& p : s.parts) j["parts"].push_back(expr_json(p));
    }
    return j;
}

}  // namespace

ManifoldExpr parse_expr(const std::string& text) {
    Parser p(text);
    return p.expr();
}

std::string print_expr(const ManifoldExpr& e) {
    if (const auto* g = std::get_if<GraphManifold>(&e.v)) return graph_str(*g);
    if (const auto* t = std::get_if<TorusBundle>(&e.v)) return "TB" + t->monodromy.str();
    if (const auto* l = std::get_if<LensSpace>(&e.v)) {
        if (l->p == 1 && l->q == 0) return "S3";
        if (l->p == 0 && l->q == 1) return "S2xS1";
        return "L(" + std::to_string(l->p) + "," + std::to_string(l->q) + ")";
    }
    const auto& s = std::get<ConnectedSum>(e.v);
    std::string out;
    for (size_t k = 0; k < s.parts.size(); ++k) {
        if (k) out += " # ";
        out += print_expr(s.parts[k]);
    }
    return out;
}

std::optional<Slope> parse_slope_token(const std::string& tok) {
    Parser p(tok);
    auto s = p.slope();
    if (!p.done()) p.fail("unexpected trailing input");
    return s;
}

std::vector<std::optional<Slope>> parse_slopes(const std::string& text) {
    Parser p(text);
    std::vector<std::optional<Slope>> out;
    if (p.done()) return out;
    out.push_back(p.slope());
    while (p.eat(',')) out.push_back(p.slope());
    if (!p.done()) p.fail("unexpected trailing input");
    return out;
}

std::string slopes_str(const std::vector<std::optional<Slope>>& slopes) {
    std::string out;
    for (size_t k = 0; k < slopes.size(); ++k) {
        if (k) out += ",";
        out += slopes[k] ? slope_str(*slopes[k]) : ".";
    }
    return out;
}

std::string expr_to_json(const ManifoldExpr& e) { return expr_json(e).dump(); }

}  // namespace chainfill
