#include "spp/sim.hpp"

#include <cmath>
#include <stdexcept>

namespace spp {

namespace {

PlanarPoint uniform_in_window(const Window& w, std::mt19937_64& rng) {
    const Bbox& bb = w.bbox();
    for (;;) {
        const PlanarPoint p{bb.xmin + uniform01(rng) * bb.width(),
                            bb.ymin + uniform01(rng) * bb.height()};
        if (w.contains(p)) return p;
    }
}

std::vector<PlanarPoint> uniform_points(const Window& w, long n,
                                        std::mt19937_64& rng) {
    std::vector<PlanarPoint> pts;
    pts.reserve(static_cast<std::size_t>(n));
    for (long i = 0; i < n; ++i) pts.push_back(uniform_in_window(w, rng));
    return pts;
}

}  // namespace

PointPattern sim_csr(std::shared_ptr<const Window> w, long n, RngSeed seed) {
    if (!w) throw std::invalid_argument("sim_csr: window required");
    if (n < 0) throw std::invalid_argument("sim_csr: n must be >= 0");
    if (!(w->area() > 0.0)) throw std::invalid_argument("sim_csr: window area is 0");
    auto rng = make_engine(seed);
    auto pts = uniform_points(*w, n, rng);
    return PointPattern(std::move(w), std::move(pts));
}

PointPattern sim_poisson(std::shared_ptr<const Window> w, double lambda,
                         RngSeed seed) {
    if (!w) throw std::invalid_argument("sim_poisson: window required");
    if (lambda < 0.0) throw std::invalid_argument("sim_poisson: lambda must be >= 0");
    auto rng = make_engine(seed);
    const double mean = lambda * w->area();
    long n = 0;
    if (mean > 0.0) {
        std::poisson_distribution<long> pois(mean);
        n = pois(rng);
    }
    auto pts = uniform_points(*w, n, rng);
    return PointPattern(std::move(w), std::move(pts));
}

PointPattern sim_inhomogeneous(std::shared_ptr<const Window> w,
                               const PixelImage& lambda_img, RngSeed seed) {
    if (!w) throw std::invalid_argument("sim_inhomogeneous: window required");
    double lambda_max = 0.0;
    for (int iy = 0; iy < lambda_img.ny(); ++iy) {
        for (int ix = 0; ix < lambda_img.nx(); ++ix) {
            if (!lambda_img.defined(ix, iy)) continue;
            const double v = lambda_img.value(ix, iy);
            if (!(v >= 0.0) || !std::isfinite(v))
                throw std::invalid_argument(
                    "sim_inhomogeneous: intensity must be finite and >= 0");
            lambda_max = std::max(lambda_max, v);
        }
    }
    if (lambda_max == 0.0) return PointPattern(std::move(w), {});

    auto rng = make_engine(seed);
    const double mean = lambda_max * w->area();
    std::poisson_distribution<long> pois(mean);
    const long n_candidates = pois(rng);
    std::vector<PlanarPoint> kept;
    for (long i = 0; i < n_candidates; ++i) {
        const PlanarPoint p = uniform_in_window(*w, rng);
        const double u = uniform01(rng);
        const auto lam = lambda_img.lookup(p);
        if (lam && u * lambda_max < *lam) kept.push_back(p);
    }
    return PointPattern(std::move(w), std::move(kept));
}

PointPattern sim_cluster(std::shared_ptr<const Window> w, int n_parents,
                         int offspring_per_parent, double sigma, RngSeed seed) {
    if (!w) throw std::invalid_argument("sim_cluster: window required");
    if (n_parents < 1 || offspring_per_parent < 1)
        throw std::invalid_argument("sim_cluster: counts must be >= 1");
    if (!(sigma > 0.0)) throw std::invalid_argument("sim_cluster: sigma must be > 0");

    auto rng = make_engine(seed);
    std::normal_distribution<double> gauss(0.0, sigma);
    std::vector<PlanarPoint> pts;
    pts.reserve(static_cast<std::size_t>(n_parents) * offspring_per_parent);
    for (int i = 0; i < n_parents; ++i) {
        const PlanarPoint parent = uniform_in_window(*w, rng);
        for (int j = 0; j < offspring_per_parent; ++j) {
            for (;;) {
                const PlanarPoint q{parent.x + gauss(rng), parent.y + gauss(rng)};
                if (w->contains(q)) {
                    pts.push_back(q);
                    break;
                }
            }
        }
    }
    return PointPattern(std::move(w), std::move(pts));
}

}  // namespace spp
