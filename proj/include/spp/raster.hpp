#ifndef SPP_RASTER_HPP
#define SPP_RASTER_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "spp/geometry.hpp"

namespace spp {

struct GridSpec {
    int nx{128};
    int ny{128};
    const Window* window{nullptr};
};

/// Rectangular grid of cells masked to a window. Cells are addressed by
/// (ix, iy) with iy = 0 the bottom row; storage is row-major iy*nx + ix.
/// Masked cells may still be undefined (no value), e.g. smoother output
/// near the border.
class PixelImage {
public:
    PixelImage() = default;

    /// Grid spanning the window bbox exactly; mask = window membership of
    /// the cell center; masked values start at 0.
    static PixelImage build(const GridSpec& spec);

    /// Same geometry and mask as `like`, masked values set to `fill`.
    static PixelImage like(const PixelImage& other, double fill = 0.0);

    int nx() const { return nx_; }
    int ny() const { return ny_; }
    double dx() const { return dx_; }
    double dy() const { return dy_; }
    double cell_area() const { return dx_ * dy_; }
    PlanarPoint origin() const { return origin_; }

    bool in_grid(int ix, int iy) const {
        return ix >= 0 && ix < nx_ && iy >= 0 && iy < ny_;
    }
    bool masked(int ix, int iy) const { return mask_[index(ix, iy)] != 0; }
    bool defined(int ix, int iy) const;
    double value(int ix, int iy) const { return values_[index(ix, iy)]; }
    void set_value(int ix, int iy, double v) { values_[index(ix, iy)] = v; }
    void set_missing(int ix, int iy);

    long masked_count() const { return masked_count_; }
    long defined_count() const;

    PlanarPoint cell_center(int ix, int iy) const {
        return {origin_.x + (ix + 0.5) * dx_, origin_.y + (iy + 0.5) * dy_};
    }
    /// Grid cell containing p, regardless of mask; nullopt outside the bbox.
    std::optional<std::pair<int, int>> cell_index(PlanarPoint p) const;

    /// Value of the masked, defined cell containing p; nullopt otherwise.
    std::optional<double> lookup(PlanarPoint p) const;

    /// dx*dy * sum of values over masked, defined cells.
    double integrate() const;

    /// Lower empirical quantile over masked, defined cell values.
    /// Throws std::invalid_argument if no cell is defined or q outside [0,1].
    double quantile_threshold(double q) const;

    std::size_t index(int ix, int iy) const {
        return static_cast<std::size_t>(iy) * nx_ + ix;
    }

private:
    int nx_{0}, ny_{0};
    double dx_{0.0}, dy_{0.0};
    PlanarPoint origin_;
    std::vector<std::uint8_t> mask_;
    std::vector<double> values_;
    long masked_count_{0};

    friend PixelImage read_esri_ascii(const std::string& path);
};

inline PixelImage build_grid(const GridSpec& spec) { return PixelImage::build(spec); }
inline double integrate(const PixelImage& img) { return img.integrate(); }
inline std::optional<double> lookup(const PixelImage& img, PlanarPoint p) {
    return img.lookup(p);
}
inline double quantile_threshold(const PixelImage& img, double q) {
    return img.quantile_threshold(q);
}

/// ESRI-ASCII-grid text format. NODATA cells encode unmasked or undefined
/// cells; square grids use a `cellsize` line, non-square ones `dx`/`dy`.
/// Values are written with 12 significant digits.
void write_esri_ascii(const PixelImage& img, const std::string& path);
PixelImage read_esri_ascii(const std::string& path);

/// Long-form CSV `x,y,value` of masked, defined cell centers.
void write_raster_csv(const PixelImage& img, const std::string& path);

}  // namespace spp

#endif
