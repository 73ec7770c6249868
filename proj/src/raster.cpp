#include "spp/raster.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace spp {

namespace {
constexpr double kNoData = -9999.0;

std::string lower(std::string s) {
    for (auto& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return s;
}
}  // namespace

PixelImage PixelImage::build(const GridSpec& spec) {
    if (spec.window == nullptr)
        throw std::invalid_argument("build_grid: window required");
    if (spec.nx < 1 || spec.ny < 1)
        throw std::invalid_argument("build_grid: nx, ny must be >= 1");

    const Bbox& bb = spec.window->bbox();
    PixelImage img;
    img.nx_ = spec.nx;
    img.ny_ = spec.ny;
    img.dx_ = bb.width() / spec.nx;
    img.dy_ = bb.height() / spec.ny;
    img.origin_ = {bb.xmin, bb.ymin};
    img.mask_.assign(static_cast<std::size_t>(spec.nx) * spec.ny, 0);
    img.values_.assign(static_cast<std::size_t>(spec.nx) * spec.ny,
                       std::numeric_limits<double>::quiet_NaN());
    for (int iy = 0; iy < spec.ny; ++iy) {
        for (int ix = 0; ix < spec.nx; ++ix) {
            if (spec.window->contains(img.cell_center(ix, iy))) {
                img.mask_[img.index(ix, iy)] = 1;
                img.values_[img.index(ix, iy)] = 0.0;
                ++img.masked_count_;
            }
        }
    }
    return img;
}

PixelImage PixelImage::like(const PixelImage& other, double fill) {
    PixelImage img = other;
    for (std::size_t i = 0; i < img.values_.size(); ++i)
        img.values_[i] = img.mask_[i] ? fill : std::numeric_limits<double>::quiet_NaN();
    return img;
}

bool PixelImage::defined(int ix, int iy) const {
    const std::size_t i = index(ix, iy);
    return mask_[i] != 0 && !std::isnan(values_[i]);
}

void PixelImage::set_missing(int ix, int iy) {
    values_[index(ix, iy)] = std::numeric_limits<double>::quiet_NaN();
}

long PixelImage::defined_count() const {
    long n = 0;
    for (std::size_t i = 0; i < values_.size(); ++i)
        if (mask_[i] && !std::isnan(values_[i])) ++n;
    return n;
}

std::optional<std::pair<int, int>> PixelImage::cell_index(PlanarPoint p) const {
    const double fx = (p.x - origin_.x) / dx_;
    const double fy = (p.y - origin_.y) / dy_;
    if (fx < 0.0 || fy < 0.0) return std::nullopt;
    int ix = static_cast<int>(fx);
    int iy = static_cast<int>(fy);
    // Points on the top/right bbox edge belong to the last cell.
    if (ix == nx_ && p.x <= origin_.x + nx_ * dx_) ix = nx_ - 1;
    if (iy == ny_ && p.y <= origin_.y + ny_ * dy_) iy = ny_ - 1;
    if (ix < 0 || ix >= nx_ || iy < 0 || iy >= ny_) return std::nullopt;
    return std::make_pair(ix, iy);
}

std::optional<double> PixelImage::lookup(PlanarPoint p) const {
    const auto cell = cell_index(p);
    if (!cell) return std::nullopt;
    const auto [ix, iy] = *cell;
    if (!defined(ix, iy)) return std::nullopt;
    return value(ix, iy);
}

double PixelImage::integrate() const {
    double acc = 0.0;
    for (std::size_t i = 0; i < values_.size(); ++i)
        if (mask_[i] && !std::isnan(values_[i])) acc += values_[i];
    return acc * dx_ * dy_;
}

double PixelImage::quantile_threshold(double q) const {
    if (q < 0.0 || q > 1.0)
        throw std::invalid_argument("quantile_threshold: q must be in [0,1]");
    std::vector<double> vals;
    vals.reserve(values_.size());
    for (std::size_t i = 0; i < values_.size(); ++i)
        if (mask_[i] && !std::isnan(values_[i])) vals.push_back(values_[i]);
    if (vals.empty())
        throw std::invalid_argument("quantile_threshold: no defined cells");
    std::sort(vals.begin(), vals.end());
    if (q <= 0.0) return vals.front();
    // Smallest v with fraction(values <= v) >= q.
    const std::size_t k = static_cast<std::size_t>(
        std::ceil(q * static_cast<double>(vals.size())));
    return vals[std::min(k, vals.size()) - 1];
}

void write_esri_ascii(const PixelImage& img, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    char buf[64];
    out << "ncols " << img.nx() << "\n";
    out << "nrows " << img.ny() << "\n";
    std::snprintf(buf, sizeof buf, "%.12g", img.origin().x);
    out << "xllcorner " << buf << "\n";
    std::snprintf(buf, sizeof buf, "%.12g", img.origin().y);
    out << "yllcorner " << buf << "\n";
    if (img.dx() == img.dy()) {
        std::snprintf(buf, sizeof buf, "%.12g", img.dx());
        out << "cellsize " << buf << "\n";
    } else {
        std::snprintf(buf, sizeof buf, "%.12g", img.dx());
        out << "dx " << buf << "\n";
        std::snprintf(buf, sizeof buf, "%.12g", img.dy());
        out << "dy " << buf << "\n";
    }
    std::snprintf(buf, sizeof buf, "%.12g", kNoData);
    out << "NODATA_value " << buf << "\n";
    for (int iy = img.ny() - 1; iy >= 0; --iy) {
        for (int ix = 0; ix < img.nx(); ++ix) {
            const double v = img.defined(ix, iy) ? img.value(ix, iy) : kNoData;
            std::snprintf(buf, sizeof buf, "%.12g", v);
            out << buf << (ix + 1 < img.nx() ? " " : "\n");
        }
    }
    if (!out) throw std::runtime_error("write failed: " + path);
}

PixelImage read_esri_ascii(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open raster: " + path);

    int ncols = -1, nrows = -1;
    double xll = 0.0, yll = 0.0, dx = -1.0, dy = -1.0, nodata = kNoData;
    std::string key;
    while (in >> key) {
        const std::string k = lower(key);
        if (k == "ncols") in >> ncols;
        else if (k == "nrows") in >> nrows;
        else if (k == "xllcorner") in >> xll;
        else if (k == "yllcorner") in >> yll;
        else if (k == "cellsize") { in >> dx; dy = dx; }
        else if (k == "dx") in >> dx;
        else if (k == "dy") in >> dy;
        else if (k == "nodata_value") in >> nodata;
        else break;  // first value token
    }
    if (ncols < 1 || nrows < 1 || dx <= 0.0 || dy <= 0.0 || !in)
        throw std::runtime_error("malformed ESRI ASCII header: " + path);

    PixelImage img;
    img.nx_ = ncols;
    img.ny_ = nrows;
    img.dx_ = dx;
    img.dy_ = dy;
    img.origin_ = {xll, yll};
    img.mask_.assign(static_cast<std::size_t>(ncols) * nrows, 0);
    img.values_.assign(static_cast<std::size_t>(ncols) * nrows,
                       std::numeric_limits<double>::quiet_NaN());

    // `key` already holds the first value token.
    double v = 0.0;
    {
        std::istringstream first(key);
        if (!(first >> v)) throw std::runtime_error("malformed raster values: " + path);
    }
    for (int iy = nrows - 1; iy >= 0; --iy) {
        for (int ix = 0; ix < ncols; ++ix) {
            if (!(iy == nrows - 1 && ix == 0)) {
                if (!(in >> v))
                    throw std::runtime_error("truncated raster values: " + path);
            }
            if (v != nodata) {
                img.mask_[img.index(ix, iy)] = 1;
                img.values_[img.index(ix, iy)] = v;
                ++img.masked_count_;
            }
        }
    }
    return img;
}

void write_raster_csv(const PixelImage& img, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << "x,y,value\n";
    char buf[192];
    for (int iy = 0; iy < img.ny(); ++iy) {
        for (int ix = 0; ix < img.nx(); ++ix) {
            if (!img.defined(ix, iy)) continue;
            const PlanarPoint c = img.cell_center(ix, iy);
            std::snprintf(buf, sizeof buf, "%.12g,%.12g,%.12g\n", c.x, c.y,
                          img.value(ix, iy));
            out << buf;
        }
    }
    if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace spp
