#ifndef SPP_SIM_HPP
#define SPP_SIM_HPP

#include <memory>

#include "spp/pattern.hpp"
#include "spp/raster.hpp"
#include "spp/rng.hpp"

namespace spp {

/// Exactly n points i.i.d. uniform on the window (binomial process),
/// by rejection from the bounding box.
PointPattern sim_csr(std::shared_ptr<const Window> w, long n, RngSeed seed);

/// Homogeneous Poisson process: N ~ Poisson(lambda * area), then N uniform
/// points.
PointPattern sim_poisson(std::shared_ptr<const Window> w, double lambda, RngSeed seed);

/// Lewis-Shedler thinning of a homogeneous process at max(lambda_img);
/// retention probability lambda(u)/lambda_max via nearest-cell lookup.
PointPattern sim_inhomogeneous(std::shared_ptr<const Window> w,
                               const PixelImage& lambda_img, RngSeed seed);

/// Parent-offspring cluster process: parents uniform, each offspring
/// Gaussian-displaced from its parent and resampled until inside the
/// window. Output holds the offspring only.
PointPattern sim_cluster(std::shared_ptr<const Window> w, int n_parents,
                         int offspring_per_parent, double sigma, RngSeed seed);

}  // namespace spp

#endif
