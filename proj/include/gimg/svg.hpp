#pragma once

#include <string>

#include "gimg/grid.hpp"
#include "gimg/pattern.hpp"

namespace gimg {

/// Panels at their body-plane placement (back panels mirrored into the
/// front view), one <path> per loop; stitched edges drawn over the outline
/// in a colour shared by both sides of the stitch.
std::string render_pattern_svg(const SewingPattern& pattern);

/// Both layers side by side: inside cells shaded, lattice edges coloured by
/// type (NonStitch grey, FrontToBack blue, SideBySide red) and each cell's
/// deformed quad outlined.
std::string render_image_svg(const GarmentImage& gi);

}  // namespace gimg
