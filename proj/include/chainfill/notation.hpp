#pragma once

#include "chainfill/manifolds.hpp"

#include <stdexcept>
#include <string>

namespace chainfill {

struct ParseError : std::runtime_error {
    size_t pos;
    ParseError(const std::string& what, size_t p)
        : std::runtime_error(what + " at offset " + std::to_string(p)), pos(p) {}
};

// Grammar, whitespace-insensitive:
//   expr   := part (' # ' part)*
//   part   := atom | chain | chain '/' mat
//   chain  := piece ('=' mat+ '=' piece)*
//   piece  := 'SFS(' base ';' fiber* ')' | alias | NAME ['(' slopes ')']
//   atom   := 'L(p,q)' | 'TB' mat | 'S3' | 'S2xS1' | 'RP3' | alias
//   mat    := '[a,b;c,d]'
//   base   := 'S2'|'D'|'A'|'P'|'RP2'|'Mb'|'K'|'(g,or,b)'|'(g,nonor,b)'
// Aliases DxS1/AxS1/PxS1/MbxS1 stand for fiberless SFS blocks; fibers are
// stored exactly as written, never reduced.
ManifoldExpr parse_expr(const std::string& text);

std::string print_expr(const ManifoldExpr& e);

// Slope tuples as used on the command line: ".", "inf", "p", "p/q".
std::optional<Slope> parse_slope_token(const std::string& tok);
std::vector<std::optional<Slope>> parse_slopes(const std::string& text);
std::string slopes_str(const std::vector<std::optional<Slope>>& slopes);

// Graph form mirroring the grammar field for field; single-line JSON.
std::string expr_to_json(const ManifoldExpr& e);

}  // namespace chainfill
