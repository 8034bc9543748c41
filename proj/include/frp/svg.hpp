#pragma once

#include <string>
#include <vector>

#include "frp/orbital.hpp"
#include "frp/spectral.hpp"

namespace frp::svg {

/// SVG 1.1 bar chart of a histogram.
std::string histogram(const spectral::Histogram& h, const std::string& title);

/// Unit circle plus one <path> per arc, coloured by level.
std::string disk(const std::vector<orbital::Arc>& arcs);

}  // namespace frp::svg
