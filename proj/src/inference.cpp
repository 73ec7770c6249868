#include "spp/inference.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "spp/parallel.hpp"
#include "spp/sim.hpp"
#include "spp/stats.hpp"

namespace spp {

namespace {

// Empirical CDF value P(X <= z) of a sorted sample.
double ecdf(const std::vector<double>& sorted, double z) {
    const auto it = std::upper_bound(sorted.begin(), sorted.end(), z);
    return static_cast<double>(it - sorted.begin()) / sorted.size();
}

// Left limit P(X < z).
double ecdf_left(const std::vector<double>& sorted, double z) {
    const auto it = std::lower_bound(sorted.begin(), sorted.end(), z);
    return static_cast<double>(it - sorted.begin()) / sorted.size();
}

}  // namespace

TestResult quadrat_test(const PointPattern& p, int nx, int ny,
                        const PixelImage& grid) {
    if (nx < 1 || ny < 1)
        throw std::invalid_argument("quadrat_test: nx, ny must be >= 1");
    if (p.n() < 1) throw std::invalid_argument("quadrat_test: empty pattern");

    const Bbox& bb = p.window().bbox();
    const double qw = bb.width() / nx;
    const double qh = bb.height() / ny;
    const int nq = nx * ny;

    struct Quadrat {
        double expected = 0.0;
        long observed = 0;
        long cells = 0;
        double cx = 0.0, cy = 0.0;  // masked-cell centroid
        bool active = false;
    };
    std::vector<Quadrat> quads(nq);

    auto quadrat_of = [&](PlanarPoint pt) {
        int qx = std::min(static_cast<int>((pt.x - bb.xmin) / qw), nx - 1);
        int qy = std::min(static_cast<int>((pt.y - bb.ymin) / qh), ny - 1);
        return qy * nx + std::max(qx, 0);
    };

    long total_cells = 0;
    for (int iy = 0; iy < grid.ny(); ++iy) {
        for (int ix = 0; ix < grid.nx(); ++ix) {
            if (!grid.masked(ix, iy)) continue;
            const PlanarPoint c = grid.cell_center(ix, iy);
            Quadrat& q = quads[quadrat_of(c)];
            ++q.cells;
            q.cx += c.x;
            q.cy += c.y;
            ++total_cells;
        }
    }
    if (total_cells == 0) throw std::invalid_argument("quadrat_test: empty mask");
    for (auto& q : quads) {
        if (q.cells > 0) {
            q.active = true;
            q.cx /= q.cells;
            q.cy /= q.cells;
            q.expected = static_cast<double>(p.n()) * q.cells / total_cells;
        }
    }
    for (const auto& pt : p.points()) ++quads[quadrat_of(pt)].observed;

    // Merge low-expectation quadrats (smallest first) into the nearest
    // active quadrat by masked-cell centroid.
    for (;;) {
        int worst = -1;
        for (int i = 0; i < nq; ++i) {
            if (!quads[i].active || quads[i].expected >= 0.5) continue;
            if (worst < 0 || quads[i].expected < quads[worst].expected) worst = i;
        }
        if (worst < 0) break;
        int nearest = -1;
        double best_d = std::numeric_limits<double>::infinity();
        for (int i = 0; i < nq; ++i) {
            if (i == worst || !quads[i].active) continue;
            const double d = std::hypot(quads[i].cx - quads[worst].cx,
                                        quads[i].cy - quads[worst].cy);
            if (d < best_d) {
                best_d = d;
                nearest = i;
            }
        }
        if (nearest < 0)
            throw std::domain_error(
                "quadrat_test: all mass in one quadrat after merging");
        Quadrat& into = quads[nearest];
        Quadrat& from = quads[worst];
        const long cells = into.cells + from.cells;
        into.cx = (into.cx * into.cells + from.cx * from.cells) / cells;
        into.cy = (into.cy * into.cells + from.cy * from.cells) / cells;
        into.cells = cells;
        into.expected += from.expected;
        into.observed += from.observed;
        from.active = false;
    }

    TestResult res;
    res.method = "quadrat chi-squared";
    int used = 0;
    for (const auto& q : quads) {
        if (!q.active) continue;
        ++used;
        res.statistic += (q.observed - q.expected) * (q.observed - q.expected) /
                         q.expected;
        res.details["observed"].push_back(static_cast<double>(q.observed));
        res.details["expected"].push_back(q.expected);
    }
    if (used < 2)
        throw std::domain_error("quadrat_test: all mass in one quadrat after merging");
    res.df = used - 1;
    res.p_value = chi_squared_sf(res.statistic, res.df);
    res.n_used = p.n();
    return res;
}

TestResult ks_test_covariate(const PointPattern& p, const PixelImage& covariate) {
    std::vector<double> cell_values;
    for (int iy = 0; iy < covariate.ny(); ++iy)
        for (int ix = 0; ix < covariate.nx(); ++ix)
            if (covariate.defined(ix, iy)) cell_values.push_back(covariate.value(ix, iy));
    if (cell_values.empty())
        throw std::invalid_argument("ks_test_covariate: covariate has no defined cells");

    std::vector<double> point_values;
    long dropped = 0;
    for (const auto& pt : p.points()) {
        if (const auto v = covariate.lookup(pt))
            point_values.push_back(*v);
        else
            ++dropped;
    }
    if (point_values.empty())
        throw std::invalid_argument("ks_test_covariate: no point has a covariate value");

    std::sort(cell_values.begin(), cell_values.end());
    std::sort(point_values.begin(), point_values.end());

    std::vector<double> candidates = cell_values;
    candidates.insert(candidates.end(), point_values.begin(), point_values.end());
    std::sort(candidates.begin(), candidates.end());
    candidates.erase(std::unique(candidates.begin(), candidates.end()),
                     candidates.end());

    // Both CDFs are right-continuous steps jumping only at candidate values,
    // so the sup is attained at a candidate or its left limit.
    double d = 0.0;
    for (const double z : candidates) {
        d = std::max(d, std::abs(ecdf(point_values, z) - ecdf(cell_values, z)));
        d = std::max(d, std::abs(ecdf_left(point_values, z) - ecdf_left(cell_values, z)));
    }

    TestResult res;
    res.method = "spatial Kolmogorov-Smirnov";
    res.statistic = d;
    res.n_used = static_cast<long>(point_values.size());
    res.n_dropped = dropped;
    res.df = static_cast<double>(res.n_used);
    res.p_value = kolmogorov_sf(std::sqrt(static_cast<double>(res.n_used)) * d);
    return res;
}

SetCovariance::SetCovariance(const PixelImage& grid, double max_displacement) {
    if (!(max_displacement > 0.0))
        throw std::invalid_argument("set covariance: displacement must be > 0");
    dx_ = grid.dx();
    dy_ = grid.dy();
    kx_ = std::min(static_cast<int>(std::ceil(max_displacement / dx_)) + 1,
                   grid.nx());
    ky_ = std::min(static_cast<int>(std::ceil(max_displacement / dy_)) + 1,
                   grid.ny());
    const int w = 2 * kx_ + 1;
    const int h = 2 * ky_ + 1;
    table_.assign(static_cast<std::size_t>(w) * h, 0.0);

    // C(i,j) = cell_area * #{cells c : c and c+(i,j) both masked};
    // C(-i,-j) = C(i,j), so compute j >= 0 and mirror.
    const double cell_area = grid.cell_area();
    parallel_for_rows(ky_ + 1, [&](int j) {
        for (int i = -kx_; i <= kx_; ++i) {
            if (j == 0 && i < 0) continue;
            long count = 0;
            const int x0 = std::max(0, -i), x1 = std::min(grid.nx(), grid.nx() - i);
            const int y0 = std::max(0, -j), y1 = std::min(grid.ny(), grid.ny() - j);
            for (int iy = y0; iy < y1; ++iy)
                for (int ix = x0; ix < x1; ++ix)
                    if (grid.masked(ix, iy) && grid.masked(ix + i, iy + j)) ++count;
            const double v = cell_area * count;
            table_[static_cast<std::size_t>(j + ky_) * w + (i + kx_)] = v;
            table_[static_cast<std::size_t>(-j + ky_) * w + (-i + kx_)] = v;
        }
    });
    area0_ = tab(0, 0);
    if (!(area0_ > 0.0))
        throw std::invalid_argument("set covariance: empty mask");
}

double SetCovariance::at(double dx, double dy) const {
    const double fx = dx / dx_;
    const double fy = dy / dy_;
    if (std::abs(fx) >= kx_ || std::abs(fy) >= ky_) return 0.0;
    const int i0 = static_cast<int>(std::floor(fx));
    const int j0 = static_cast<int>(std::floor(fy));
    const double tx = fx - i0;
    const double ty = fy - j0;
    const double v00 = tab(i0, j0), v10 = tab(i0 + 1, j0);
    const double v01 = tab(i0, j0 + 1), v11 = tab(i0 + 1, j0 + 1);
    return (1 - tx) * (1 - ty) * v00 + tx * (1 - ty) * v10 + (1 - tx) * ty * v01 +
           tx * ty * v11;
}

namespace {

void check_r_grid(const PointPattern& p, const std::vector<double>& r_grid) {
    if (p.n() < 2) throw std::invalid_argument("ripley_k: need n >= 2");
    if (r_grid.empty() || !std::is_sorted(r_grid.begin(), r_grid.end()))
        throw std::invalid_argument("ripley_k: r grid must be increasing");
    if (r_grid.front() < 0.0) throw std::invalid_argument("ripley_k: negative r");
    if (r_grid.back() > p.window().bbox().diagonal())
        throw std::invalid_argument("ripley_k: r exceeds the bbox diagonal");
}

// Sequential core so envelope replicates can run in parallel around it.
KFunctionEstimate ripley_k_core(const std::vector<PlanarPoint>& pts,
                                const std::vector<double>& r_grid,
                                const SetCovariance& cov) {
    const double r_max = r_grid.back();
    const double area = cov.area0();
    const std::size_t n = pts.size();

    // (distance, translation weight) for pairs within r_max, then prefix
    // sums over the sorted distances.
    std::vector<std::pair<double, double>> pairs;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (j == i) continue;
            const double d = distance(pts[i], pts[j]);
            if (d > r_max) continue;
            const double overlap = cov.at(pts[j].x - pts[i].x, pts[j].y - pts[i].y);
            pairs.emplace_back(d, overlap > 0.0 ? area / overlap : 0.0);
        }
    }
    std::sort(pairs.begin(), pairs.end());

    KFunctionEstimate est;
    est.r = r_grid;
    est.khat.resize(r_grid.size());
    const double scale = area / (static_cast<double>(n) * static_cast<double>(n));
    double acc = 0.0;
    std::size_t idx = 0;
    for (std::size_t k = 0; k < r_grid.size(); ++k) {
        while (idx < pairs.size() && pairs[idx].first <= r_grid[k])
            acc += pairs[idx++].second;
        est.khat[k] = scale * acc;
    }
    return est;
}

}  // namespace

KFunctionEstimate ripley_k(const PointPattern& p, const std::vector<double>& r_grid,
                           const PixelImage& grid) {
    check_r_grid(p, r_grid);
    const SetCovariance cov(grid,
                            std::max(r_grid.back(), grid.dx() + grid.dy()));
    return ripley_k_core(p.points(), r_grid, cov);
}

Envelope envelope_of(const std::vector<KFunctionEstimate>& sims) {
    if (sims.empty()) throw std::invalid_argument("envelope_of: no simulations");
    Envelope env;
    env.r = sims[0].r;
    env.nsim = static_cast<int>(sims.size());
    env.lower.assign(env.r.size(), std::numeric_limits<double>::infinity());
    env.upper.assign(env.r.size(), -std::numeric_limits<double>::infinity());
    for (const auto& s : sims) {
        if (s.r.size() != env.r.size())
            throw std::invalid_argument("envelope_of: mismatched r grids");
        for (std::size_t k = 0; k < env.r.size(); ++k) {
            env.lower[k] = std::min(env.lower[k], s.khat[k]);
            env.upper[k] = std::max(env.upper[k], s.khat[k]);
        }
    }
    return env;
}

EnvelopeResult k_envelope(const PointPattern& p, int nsim,
                          const std::vector<double>& r_grid,
                          const PixelImage& grid, RngSeed seed) {
    if (nsim < 1) throw std::invalid_argument("k_envelope: nsim must be >= 1");
    check_r_grid(p, r_grid);
    const SetCovariance cov(grid,
                            std::max(r_grid.back(), grid.dx() + grid.dy()));
    EnvelopeResult result;
    result.data_k = ripley_k_core(p.points(), r_grid, cov);

    std::vector<KFunctionEstimate> sims(nsim);
    auto window = p.window_ptr();
    const long n = p.n();
    parallel_for_rows(nsim, [&](int k) {
        const PointPattern sim = sim_csr(
            window, n, RngSeed{seed.seed, seed.stream + static_cast<std::uint64_t>(k)});
        sims[k] = ripley_k_core(sim.points(), r_grid, cov);
    });
    result.envelope = envelope_of(sims);
    for (std::size_t k = 0; k < r_grid.size(); ++k) {
        if (result.data_k.khat[k] < result.envelope.lower[k] ||
            result.data_k.khat[k] > result.envelope.upper[k]) {
            result.outside = true;
            break;
        }
    }
    return result;
}

}  // namespace spp
