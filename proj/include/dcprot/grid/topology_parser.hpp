#pragma once

#include "dcprot/grid/types.hpp"

#include <string>

namespace dcprot::grid {

/// Parses a topology configuration document. Sections: [buses], [lines],
/// [sources], [loads], [relays]. Throws ParseError with a line location for
/// syntax problems and SemanticError for invariant violations.
GridTopology load_topology(const std::string& text, const std::string& origin = "<string>");

GridTopology load_topology_file(const std::string& path);

} // namespace dcprot::grid
