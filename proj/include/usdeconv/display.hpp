#pragma once

#include "usdeconv/grid.hpp"

namespace usdeconv {

/// B-mode-style rendering: magnitude envelope, peak-normalized, log
/// compressed to [0,1] over the given dynamic range in dB. A value at
/// exactly -dynamic_range_db of the peak maps to 0, the peak to 1.
ImageGrid bmode_render(const ImageGrid& grid, double dynamic_range_db = 40.0);

} // namespace usdeconv
