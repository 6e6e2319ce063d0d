#include "usdeconv/display.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace usdeconv {

ImageGrid bmode_render(const ImageGrid& grid, double dynamic_range_db) {
    if (!(dynamic_range_db > 0.0))
        throw std::invalid_argument("bmode: dynamic range must be positive");
    double peak = 0.0;
    for (double v : grid.data) peak = std::max(peak, std::fabs(v));
    if (peak == 0.0) throw std::invalid_argument("bmode: all-zero input");
    ImageGrid out(grid.rows, grid.cols, 0.0);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double e = std::fabs(grid.data[i]) / peak;
        const double db = e > 0.0 ? 20.0 * std::log10(e) : -std::numeric_limits<double>::infinity();
        out.data[i] = std::clamp(1.0 + db / dynamic_range_db, 0.0, 1.0);
    }
    return out;
}

} // namespace usdeconv
