#ifndef SPP_PROJECTION_HPP
#define SPP_PROJECTION_HPP

#include "spp/geometry.hpp"

namespace spp {

/// Geographic coordinate in degrees.
struct LonLat {
    double lon{0.0};
    double lat{0.0};
};

/// Lambert conformal conic with two standard parallels on an ellipsoid
/// (Snyder formulation). All lengths in kilometers, angles in degrees.
struct ProjectionSpec {
    double parallel1_deg;
    double parallel2_deg;
    double origin_lat_deg;
    double origin_lon_deg;
    double false_easting_km;
    double false_northing_km;
    double semi_major_km;
    double flattening;

    /// French "Lambert II etendu" on the Clarke 1880 IGN ellipsoid.
    static ProjectionSpec lambert2_etendu();
};

/// Precomputed forward/inverse mapping for one ProjectionSpec.
class Projection {
public:
    explicit Projection(const ProjectionSpec& spec);

    PlanarPoint forward(LonLat g) const;
    LonLat inverse(PlanarPoint p) const;

    const ProjectionSpec& spec() const { return spec_; }

private:
    ProjectionSpec spec_;
    double e_;       // eccentricity
    double n_;       // cone constant
    double af_;      // a * F
    double rho0_;    // radius at the origin latitude
    double lon0_rad_;
};

inline PlanarPoint project(LonLat g, const ProjectionSpec& spec) {
    return Projection(spec).forward(g);
}

}  // namespace spp

#endif
