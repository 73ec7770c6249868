#ifndef SPP_RENDER_HPP
#define SPP_RENDER_HPP

#include <string>
#include <vector>

#include "spp/raster.hpp"

namespace spp {

enum class PaletteMode { linear, quantile };

struct LegendEntry {
    double value;        // breakpoint in data units
    std::string color;   // "#rrggbb"
};

/// Writes the raster as a PNG heatmap, one pixel per cell, undefined cells
/// transparent. Linear mode maps min..max onto the color ramp; quantile
/// mode uses 8 equal-count classes. Returns the legend breakpoints that a
/// sidecar JSON is built from.
std::vector<LegendEntry> render_png(const PixelImage& img, const std::string& path,
                                    PaletteMode mode);

}  // namespace spp

#endif
