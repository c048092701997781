#pragma once

#include <vector>

#include "loopw/ast.hpp"
#include "loopw/diagnostic.hpp"

namespace loopw {

/// Structural checks that run before typing: purity stratification (no
/// jump or label block in expression position), index-variable scoping,
/// labels kept out of the index language, distinct names in binder and
/// footprint lists, equation shape, and the data-mute fragment. Returns an
/// empty list iff the program is well formed.
std::vector<Diagnostic> well_formed(const Program& p);

}  // namespace loopw
