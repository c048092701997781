#pragma once

#include <string>

#include "loopw/ast.hpp"

namespace loopw {

// Concrete-syntax rendering. Output of print_program parses back to a
// structurally equal Program.

std::string to_string(const IndexTerm& t);
std::string to_string(const IndexFormula& f);
std::string to_string(const Ty& ty);
std::string to_string(const Expr& e);
std::string to_string(const Stmt& s, int indent = 0);

std::string print_program(const Program& p);

}  // namespace loopw
