#include "spp/smoothing.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "spp/parallel.hpp"

namespace spp {

namespace {

// Kernel contributions beyond 8 sigma are below 1.3e-14 of the mode and
// are truncated.
constexpr double kTruncation2 = 64.0;

struct KernelEval {
    double inv_2sx2;
    double inv_2sy2;
    double norm;

    explicit KernelEval(const Bandwidth& bw)
        : inv_2sx2(0.5 / (bw.sigma_x * bw.sigma_x)),
          inv_2sy2(0.5 / (bw.sigma_y * bw.sigma_y)),
          norm(1.0 / (2.0 * std::numbers::pi * bw.sigma_x * bw.sigma_y)) {}

    double operator()(double dx, double dy) const {
        const double q = dx * dx * inv_2sx2 + dy * dy * inv_2sy2;
        return q > 0.5 * kTruncation2 ? 0.0 : norm * std::exp(-q);
    }
};

void require_valid(const Bandwidth& bw) {
    if (!bw.valid()) throw std::invalid_argument("bandwidth must be positive");
}

// Index window of cells within the kernel truncation radius of x.
struct CellRange {
    int ix0, ix1, iy0, iy1;
};

CellRange truncated_range(PlanarPoint x, const PixelImage& grid, const Bandwidth& bw) {
    const double rx = 8.0 * bw.sigma_x;
    const double ry = 8.0 * bw.sigma_y;
    const PlanarPoint o = grid.origin();
    int ix0 = static_cast<int>(std::floor((x.x - rx - o.x) / grid.dx()));
    int ix1 = static_cast<int>(std::floor((x.x + rx - o.x) / grid.dx()));
    int iy0 = static_cast<int>(std::floor((x.y - ry - o.y) / grid.dy()));
    int iy1 = static_cast<int>(std::floor((x.y + ry - o.y) / grid.dy()));
    return {std::max(ix0, 0), std::min(ix1, grid.nx() - 1), std::max(iy0, 0),
            std::min(iy1, grid.ny() - 1)};
}

double cv_density(const PointPattern& p, const PixelImage& grid, double sigma) {
    const Bandwidth bw = Bandwidth::isotropic(sigma);
    const std::vector<double> e = edge_corrections(p, grid, bw);
    const PixelImage lam = kernel_intensity(p, bw, grid);

    double term1 = 0.0;
    for (int iy = 0; iy < grid.ny(); ++iy)
        for (int ix = 0; ix < grid.nx(); ++ix)
            if (lam.defined(ix, iy)) term1 += lam.value(ix, iy) * lam.value(ix, iy);
    term1 *= grid.cell_area();

    const KernelEval kernel(bw);
    const auto& pts = p.points();
    double term2 = 0.0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        double loo = 0.0;
        for (std::size_t j = 0; j < pts.size(); ++j) {
            if (j == i) continue;
            loo += e[j] * kernel(pts[j].x - pts[i].x, pts[j].y - pts[i].y);
        }
        term2 += loo;
    }
    return term1 - 2.0 * term2;
}

double cv_smoother(const PointPattern& p, double sigma) {
    // Leave-one-out squared error; weights renormalized by the largest one
    // so the nearest-neighbour limit survives small sigma without underflow.
    const double inv_2s2 = 0.5 / (sigma * sigma);
    const auto& pts = p.points();
    const auto& marks = p.marks();
    const std::size_t n = pts.size();
    double sse = 0.0;
    std::vector<double> q(n);
    for (std::size_t i = 0; i < n; ++i) {
        double qmin = std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < n; ++j) {
            if (j == i) continue;
            const double dx = pts[j].x - pts[i].x;
            const double dy = pts[j].y - pts[i].y;
            q[j] = (dx * dx + dy * dy) * inv_2s2;
            qmin = std::min(qmin, q[j]);
        }
        double num = 0.0, den = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            if (j == i) continue;
            const double w = std::exp(-(q[j] - qmin));
            num += w * marks[j];
            den += w;
        }
        const double g = num / den;
        sse += (marks[i] - g) * (marks[i] - g);
    }
    return sse;
}

template <typename F>
BandwidthSearch scan_and_refine(F objective, double sigma_lo, double sigma_hi,
                                int nscan) {
    if (!(sigma_lo > 0.0) || !(sigma_hi > sigma_lo))
        throw std::invalid_argument("bandwidth search range must satisfy 0 < lo < hi");
    nscan = std::max(nscan, 5);

    BandwidthSearch result;
    result.profile.reserve(nscan);
    const double log_lo = std::log(sigma_lo);
    const double step = (std::log(sigma_hi) - log_lo) / (nscan - 1);
    for (int i = 0; i < nscan; ++i) {
        const double s = std::exp(log_lo + i * step);
        result.profile.emplace_back(s, objective(s));
    }

    int best = 0;
    double vmin = result.profile[0].second, vmax = vmin;
    for (int i = 1; i < nscan; ++i) {
        const double v = result.profile[i].second;
        if (v < result.profile[best].second) best = i;
        vmin = std::min(vmin, v);
        vmax = std::max(vmax, v);
    }
    result.degenerate = (vmax - vmin) <= 1e-14 * (std::abs(vmax) + std::abs(vmin) + 1e-300);
    if (result.degenerate) {
        result.sigma = result.profile.front().first;
        result.objective = result.profile.front().second;
        result.unimodal = false;
        return result;
    }

    int minima = 0;
    for (int i = 0; i < nscan; ++i) {
        const double v = result.profile[i].second;
        const bool left_ok = (i == 0) || result.profile[i - 1].second > v;
        const bool right_ok = (i == nscan - 1) || result.profile[i + 1].second > v;
        if (left_ok && right_ok) ++minima;
    }
    result.unimodal = (minima <= 1);

    // Golden-section refinement in log-sigma between the scan neighbours.
    double a = std::log(result.profile[std::max(best - 1, 0)].first);
    double b = std::log(result.profile[std::min(best + 1, nscan - 1)].first);
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = objective(std::exp(c));
    double fd = objective(std::exp(d));
    for (int it = 0; it < 40 && (b - a) > 1e-6; ++it) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = objective(std::exp(c));
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = objective(std::exp(d));
        }
    }
    const double refined = std::exp(fc < fd ? c : d);
    const double refined_val = std::min(fc, fd);
    if (refined_val < result.profile[best].second) {
        result.sigma = refined;
        result.objective = refined_val;
    } else {
        result.sigma = result.profile[best].first;
        result.objective = result.profile[best].second;
    }
    return result;
}

}  // namespace

double gaussian_kernel(double dx, double dy, const Bandwidth& bw) {
    require_valid(bw);
    return KernelEval(bw)(dx, dy);
}

double edge_correction(PlanarPoint x, const PixelImage& grid, const Bandwidth& bw) {
    require_valid(bw);
    const KernelEval kernel(bw);
    const CellRange r = truncated_range(x, grid, bw);
    double mass = 0.0;
    for (int iy = r.iy0; iy <= r.iy1; ++iy) {
        for (int ix = r.ix0; ix <= r.ix1; ++ix) {
            if (!grid.masked(ix, iy)) continue;
            const PlanarPoint u = grid.cell_center(ix, iy);
            mass += kernel(x.x - u.x, x.y - u.y);
        }
    }
    mass *= grid.cell_area();
    if (!(mass > 0.0))
        throw std::domain_error("edge_correction: no kernel mass retained in window");
    return 1.0 / mass;
}

std::vector<double> edge_corrections(const PointPattern& p, const PixelImage& grid,
                                     const Bandwidth& bw) {
    std::vector<double> e(p.points().size());
    parallel_for_rows(static_cast<int>(e.size()), [&](int i) {
        e[i] = edge_correction(p.points()[i], grid, bw);
    });
    return e;
}

PixelImage kernel_intensity(const PointPattern& p, const Bandwidth& bw,
                            const PixelImage& grid,
                            const std::vector<double>* weights) {
    require_valid(bw);
    if (weights != nullptr) {
        if (weights->size() != p.points().size())
            throw std::invalid_argument("weights must align with points");
        for (const double w : *weights)
            if (!(w >= 0.0)) throw std::invalid_argument("weights must be >= 0");
    }
    PixelImage out = PixelImage::like(grid);
    if (p.n() == 0) return out;

    const std::vector<double> e = edge_corrections(p, grid, bw);
    const KernelEval kernel(bw);
    const auto& pts = p.points();
    parallel_for_rows(grid.ny(), [&](int iy) {
        for (int ix = 0; ix < grid.nx(); ++ix) {
            if (!grid.masked(ix, iy)) continue;
            const PlanarPoint u = grid.cell_center(ix, iy);
            double acc = 0.0;
            for (std::size_t i = 0; i < pts.size(); ++i) {
                const double k = kernel(pts[i].x - u.x, pts[i].y - u.y);
                const double w = weights ? (*weights)[i] : 1.0;
                acc += w * e[i] * k;
            }
            out.set_value(ix, iy, acc);
        }
    });
    return out;
}

PixelImage nw_smooth(const PointPattern& p, const Bandwidth& bw,
                     const PixelImage& grid) {
    require_valid(bw);
    if (!p.has_marks())
        throw std::invalid_argument("nw_smooth: pattern has no marks");

    // Kernel mass below this (per km^2) leaves the cell undefined.
    constexpr double kDenominatorFloor = 1e-12;

    PixelImage out = PixelImage::like(grid);
    const KernelEval kernel(bw);
    const auto& pts = p.points();
    const auto& marks = p.marks();
    parallel_for_rows(grid.ny(), [&](int iy) {
        for (int ix = 0; ix < grid.nx(); ++ix) {
            if (!grid.masked(ix, iy)) continue;
            const PlanarPoint u = grid.cell_center(ix, iy);
            double num = 0.0, den = 0.0;
            for (std::size_t i = 0; i < pts.size(); ++i) {
                const double k = kernel(u.x - pts[i].x, u.y - pts[i].y);
                num += k * marks[i];
                den += k;
            }
            if (den < kDenominatorFloor)
                out.set_missing(ix, iy);
            else
                out.set_value(ix, iy, num / den);
        }
    });
    return out;
}

Bandwidth bw_scott(const PointPattern& p) {
    const long n = p.n();
    if (n < 2) throw std::invalid_argument("bw_scott: need at least 2 points");
    double mx = 0.0, my = 0.0;
    for (const auto& q : p.points()) {
        mx += q.x;
        my += q.y;
    }
    mx /= n;
    my /= n;
    double vx = 0.0, vy = 0.0;
    for (const auto& q : p.points()) {
        vx += (q.x - mx) * (q.x - mx);
        vy += (q.y - my) * (q.y - my);
    }
    vx /= (n - 1);
    vy /= (n - 1);
    if (vx <= 0.0 || vy <= 0.0)
        throw std::domain_error("bw_scott: zero variance in a coordinate");
    const double factor = std::pow(static_cast<double>(n), -1.0 / 6.0);
    return {std::sqrt(vx) * factor, std::sqrt(vy) * factor};
}

BandwidthSearch bw_lscv_density(const PointPattern& p, const PixelImage& grid,
                                double sigma_lo, double sigma_hi, int nscan) {
    if (p.n() < 2) throw std::invalid_argument("bw_lscv_density: need n >= 2");
    return scan_and_refine([&](double s) { return cv_density(p, grid, s); },
                           sigma_lo, sigma_hi, nscan);
}

BandwidthSearch bw_lscv_smoother(const PointPattern& p, double sigma_lo,
                                 double sigma_hi, int nscan) {
    if (p.n() < 3) throw std::invalid_argument("bw_lscv_smoother: need n >= 3");
    if (!p.has_marks()) throw std::invalid_argument("bw_lscv_smoother: marks required");
    return scan_and_refine([&](double s) { return cv_smoother(p, s); }, sigma_lo,
                           sigma_hi, nscan);
}

}  // namespace spp
