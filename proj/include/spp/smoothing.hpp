#ifndef SPP_SMOOTHING_HPP
#define SPP_SMOOTHING_HPP

#include <utility>
#include <vector>

#include "spp/pattern.hpp"
#include "spp/raster.hpp"

namespace spp {

/// Gaussian kernel scale in kilometers; anisotropic when sigma_x != sigma_y.
struct Bandwidth {
    double sigma_x;
    double sigma_y;

    static Bandwidth isotropic(double sigma) { return {sigma, sigma}; }
    bool valid() const { return sigma_x > 0.0 && sigma_y > 0.0; }
};

/// Bivariate Gaussian density (per km^2) at displacement (dx, dy);
/// integrates to 1 over the plane.
double gaussian_kernel(double dx, double dy, const Bandwidth& bw);

/// Reciprocal of the kernel mass retained inside the window for a kernel
/// centered at x, computed as a Riemann sum over the masked grid cells.
/// Throws std::domain_error when the retained mass is not positive.
double edge_correction(PlanarPoint x, const PixelImage& grid, const Bandwidth& bw);

/// edge_correction for every point of the pattern.
std::vector<double> edge_corrections(const PointPattern& p, const PixelImage& grid,
                                     const Bandwidth& bw);

/// Edge-corrected kernel intensity estimate on the masked grid:
/// lambda*(u) = sum_i w_i e(x_i) k(x_i - u). Weights default to 1.
/// By construction integrate(result) recovers sum w_i.
PixelImage kernel_intensity(const PointPattern& p, const Bandwidth& bw,
                            const PixelImage& grid,
                            const std::vector<double>* weights = nullptr);

/// Nadaraya-Watson kernel-weighted mean of the marks on the masked grid.
/// Cells whose kernel mass falls below the underflow threshold are left
/// undefined (missing near the border for small bandwidths).
PixelImage nw_smooth(const PointPattern& p, const Bandwidth& bw,
                     const PixelImage& grid);

/// 2-D Scott rule: sigma = sd(coord) * n^(-1/6), per axis.
Bandwidth bw_scott(const PointPattern& p);

struct BandwidthSearch {
    double sigma;
    double objective;    // criterion value at sigma
    bool unimodal;       // scanned profile had a single local minimum
    bool degenerate;     // objective flat over the scanned range
    std::vector<std::pair<double, double>> profile;  // (sigma, criterion) scanned
};

/// Least-squares cross-validation for the intensity:
/// CV(s) = int lambda_s*^2 - 2 sum_i lambda*_{s,-i}(x_i), minimized over a
/// log-spaced scan of [sigma_lo, sigma_hi] refined by golden-section search.
BandwidthSearch bw_lscv_density(const PointPattern& p, const PixelImage& grid,
                                double sigma_lo, double sigma_hi, int nscan = 50);

/// Leave-one-out squared error of the Nadaraya-Watson smoother at the data
/// points, minimized the same way. Requires marks and n >= 3.
BandwidthSearch bw_lscv_smoother(const PointPattern& p, double sigma_lo,
                                 double sigma_hi, int nscan = 50);

}  // namespace spp

#endif
