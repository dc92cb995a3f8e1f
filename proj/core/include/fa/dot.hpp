#pragma once

#include <string>
#include <vector>

#include "fa/structure.hpp"

namespace fa {

// Renders an arrow as a DOT digraph: one cluster for the codomain box with
// its ports, one record node per constituent with input/output compartments,
// and one labeled edge per link. Output is deterministic: byte-equal for
// equal inputs.
//
// `constituents` gives the decomposition of the domain; when empty the domain
// is drawn as a single node.
std::string render_dot(const WiringArrow& arrow,
                       std::vector<BoxShape> constituents = {});

std::string render_dot(const MultiArrow& ma);

}  // namespace fa
