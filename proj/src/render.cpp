#include "spp/render.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <png.h>
#include <stdexcept>

namespace spp {

namespace {

struct Rgb {
    unsigned char r, g, b;
};

// Dark blue -> cyan -> yellow -> red ramp.
constexpr Rgb kStops[] = {
    {13, 8, 135}, {70, 3, 159}, {114, 1, 168}, {156, 23, 158},
    {189, 55, 134}, {216, 87, 107}, {237, 121, 83}, {251, 159, 58},
    {253, 202, 38}, {240, 249, 33}};
constexpr int kStopCount = static_cast<int>(std::size(kStops));

Rgb ramp(double t) {
    t = std::clamp(t, 0.0, 1.0);
    const double pos = t * (kStopCount - 1);
    const int i = std::min(static_cast<int>(pos), kStopCount - 2);
    const double f = pos - i;
    auto mix = [f](unsigned char a, unsigned char b) {
        return static_cast<unsigned char>(std::lround(a + f * (b - a)));
    };
    return {mix(kStops[i].r, kStops[i + 1].r), mix(kStops[i].g, kStops[i + 1].g),
            mix(kStops[i].b, kStops[i + 1].b)};
}

std::string hex_color(Rgb c) {
    char buf[8];
    std::snprintf(buf, sizeof buf, "#%02x%02x%02x", c.r, c.g, c.b);
    return buf;
}

void write_rgba_png(const std::string& path, int width, int height,
                    const std::vector<unsigned char>& rgba) {
    std::FILE* fp = std::fopen(path.c_str(), "wb");
    if (fp == nullptr) throw std::runtime_error("cannot open for writing: " + path);
    png_structp png =
        png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    png_infop info = png != nullptr ? png_create_info_struct(png) : nullptr;
    if (info == nullptr) {
        if (png != nullptr) png_destroy_write_struct(&png, nullptr);
        std::fclose(fp);
        throw std::runtime_error("libpng initialization failed");
    }
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_write_struct(&png, &info);
        std::fclose(fp);
        throw std::runtime_error("libpng write failed: " + path);
    }
    png_init_io(png, fp);
    png_set_IHDR(png, info, width, height, 8, PNG_COLOR_TYPE_RGBA,
                 PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
                 PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);
    std::vector<png_bytep> rows(height);
    for (int y = 0; y < height; ++y)
        rows[y] = const_cast<png_bytep>(&rgba[static_cast<std::size_t>(y) * width * 4]);
    png_write_image(png, rows.data());
    png_write_end(png, nullptr);
    png_destroy_write_struct(&png, &info);
    std::fclose(fp);
}

}  // namespace

std::vector<LegendEntry> render_png(const PixelImage& img, const std::string& path,
                                    PaletteMode mode) {
    if (img.defined_count() == 0)
        throw std::invalid_argument("render_png: raster has no defined cells");

    double vmin = 0.0, vmax = 0.0;
    bool first = true;
    for (int iy = 0; iy < img.ny(); ++iy) {
        for (int ix = 0; ix < img.nx(); ++ix) {
            if (!img.defined(ix, iy)) continue;
            const double v = img.value(ix, iy);
            vmin = first ? v : std::min(vmin, v);
            vmax = first ? v : std::max(vmax, v);
            first = false;
        }
    }

    constexpr int kClasses = 8;
    std::vector<double> breaks;
    std::vector<LegendEntry> legend;
    if (mode == PaletteMode::quantile) {
        for (int k = 1; k < kClasses; ++k)
            breaks.push_back(img.quantile_threshold(static_cast<double>(k) / kClasses));
    }

    auto color_of = [&](double v) {
        if (mode == PaletteMode::linear) {
            const double t = vmax > vmin ? (v - vmin) / (vmax - vmin) : 0.0;
            return ramp(t);
        }
        int cls = 0;
        while (cls < static_cast<int>(breaks.size()) && v > breaks[cls]) ++cls;
        return ramp(kClasses > 1 ? static_cast<double>(cls) / (kClasses - 1) : 0.0);
    };

    std::vector<unsigned char> rgba(
        static_cast<std::size_t>(img.nx()) * img.ny() * 4, 0);
    for (int iy = 0; iy < img.ny(); ++iy) {
        const int row = img.ny() - 1 - iy;  // image row 0 is the top
        for (int ix = 0; ix < img.nx(); ++ix) {
            if (!img.defined(ix, iy)) continue;
            const Rgb c = color_of(img.value(ix, iy));
            unsigned char* px =
                &rgba[(static_cast<std::size_t>(row) * img.nx() + ix) * 4];
            px[0] = c.r;
            px[1] = c.g;
            px[2] = c.b;
            px[3] = 255;
        }
    }
    write_rgba_png(path, img.nx(), img.ny(), rgba);

    if (mode == PaletteMode::linear) {
        for (int k = 0; k <= kClasses; ++k) {
            const double t = static_cast<double>(k) / kClasses;
            legend.push_back({vmin + t * (vmax - vmin), hex_color(ramp(t))});
        }
    } else {
        legend.push_back({vmin, hex_color(ramp(0.0))});
        for (int k = 0; k < static_cast<int>(breaks.size()); ++k)
            legend.push_back(
                {breaks[k], hex_color(ramp(static_cast<double>(k + 1) / (kClasses - 1)))});
        legend.push_back({vmax, hex_color(ramp(1.0))});
    }
    return legend;
}

}  // namespace spp
