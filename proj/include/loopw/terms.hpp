#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>

#include "loopw/ast.hpp"

namespace loopw {

using Subst = std::map<std::string, IndexTerm>;

/// Value of a canonical Zero/Succ chain, nullopt for anything else.
std::optional<std::uint64_t> numeral_value(const IndexTerm& t);

bool occurs(const std::string& var, const IndexTerm& t);
std::size_t term_size(const IndexTerm& t);

std::set<std::string> free_vars(const IndexTerm& t);
std::set<std::string> free_vars(const IndexFormula& f);
std::set<std::string> free_vars(const Ty& ty);
void collect_free_vars(const IndexTerm& t, std::set<std::string>& out);
void collect_free_vars(const IndexFormula& f, std::set<std::string>& out);
void collect_free_vars(const Ty& ty, std::set<std::string>& out);

/// Capture-avoiding substitution. Bound names that would capture a free
/// variable of the substituted terms are renamed.
IndexTerm substitute(const IndexTerm& t, const Subst& s);
IndexFormula substitute(const IndexFormula& f, const Subst& s);
Ty substitute(const Ty& ty, const Subst& s);

/// `base` if it is not in `avoid`, otherwise `base'1`, `base'2`, ...
std::string fresh_name(const std::string& base, const std::set<std::string>& avoid);

}  // namespace loopw
