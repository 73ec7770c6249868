#include "spp/projection.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace spp {

namespace {

constexpr double kDegToRad = std::numbers::pi / 180.0;

double lambert_m(double phi, double e) {
    const double s = std::sin(phi);
    return std::cos(phi) / std::sqrt(1.0 - e * e * s * s);
}

double lambert_t(double phi, double e) {
    const double s = std::sin(phi);
    return std::tan(std::numbers::pi / 4.0 - phi / 2.0) /
           std::pow((1.0 - e * s) / (1.0 + e * s), e / 2.0);
}

}  // namespace

ProjectionSpec ProjectionSpec::lambert2_etendu() {
    // NTF / Lambert II etendu (EPSG:27572), Clarke 1880 IGN, in kilometers.
    return ProjectionSpec{
        .parallel1_deg = 45.0 + 53.0 / 60.0 + 56.108 / 3600.0,
        .parallel2_deg = 47.0 + 41.0 / 60.0 + 45.652 / 3600.0,
        .origin_lat_deg = 46.8,
        .origin_lon_deg = 2.0 + 20.0 / 60.0 + 14.025 / 3600.0,
        .false_easting_km = 600.0,
        .false_northing_km = 2200.0,
        .semi_major_km = 6378.2492,
        .flattening = 1.0 / 293.4660212936269,
    };
}

Projection::Projection(const ProjectionSpec& spec) : spec_(spec) {
    if (spec.semi_major_km <= 0.0 || spec.flattening < 0.0 || spec.flattening >= 1.0)
        throw std::invalid_argument("projection: invalid ellipsoid");
    if (std::abs(spec.parallel1_deg) >= 90.0 || std::abs(spec.parallel2_deg) >= 90.0)
        throw std::invalid_argument("projection: standard parallel at a pole");
    if (spec.parallel1_deg == -spec.parallel2_deg)
        throw std::invalid_argument("projection: parallels opposite, cone undefined");

    e_ = std::sqrt(spec.flattening * (2.0 - spec.flattening));
    const double phi1 = spec.parallel1_deg * kDegToRad;
    const double phi2 = spec.parallel2_deg * kDegToRad;
    const double phi0 = spec.origin_lat_deg * kDegToRad;
    lon0_rad_ = spec.origin_lon_deg * kDegToRad;

    const double m1 = lambert_m(phi1, e_);
    const double t1 = lambert_t(phi1, e_);
    if (spec.parallel1_deg != spec.parallel2_deg) {
        const double m2 = lambert_m(phi2, e_);
        const double t2 = lambert_t(phi2, e_);
        n_ = (std::log(m1) - std::log(m2)) / (std::log(t1) - std::log(t2));
    } else {
        n_ = std::sin(phi1);
    }
    af_ = spec.semi_major_km * m1 / (n_ * std::pow(t1, n_));
    rho0_ = af_ * std::pow(lambert_t(phi0, e_), n_);
}

PlanarPoint Projection::forward(LonLat g) const {
    if (!(std::abs(g.lat) < 90.0))
        throw std::domain_error("projection: latitude must satisfy |lat| < 90");
    const double phi = g.lat * kDegToRad;
    const double rho = af_ * std::pow(lambert_t(phi, e_), n_);
    if (!std::isfinite(rho))
        throw std::domain_error("projection: latitude outside cone domain");
    double dlon = g.lon * kDegToRad - lon0_rad_;
    while (dlon > std::numbers::pi) dlon -= 2.0 * std::numbers::pi;
    while (dlon < -std::numbers::pi) dlon += 2.0 * std::numbers::pi;
    const double theta = n_ * dlon;
    return {spec_.false_easting_km + rho * std::sin(theta),
            spec_.false_northing_km + rho0_ - rho * std::cos(theta)};
}

LonLat Projection::inverse(PlanarPoint p) const {
    double dx = p.x - spec_.false_easting_km;
    double dy = rho0_ - (p.y - spec_.false_northing_km);
    double rho = std::hypot(dx, dy);
    if (n_ < 0.0) {
        rho = -rho;
        dx = -dx;
        dy = -dy;
    }
    if (rho == 0.0)
        return {spec_.origin_lon_deg, n_ > 0.0 ? 90.0 : -90.0};

    const double theta = std::atan2(dx, dy);
    const double t = std::pow(rho / af_, 1.0 / n_);
    double phi = std::numbers::pi / 2.0 - 2.0 * std::atan(t);
    for (int iter = 0; iter < 40; ++iter) {
        const double es = e_ * std::sin(phi);
        const double next = std::numbers::pi / 2.0 -
                            2.0 * std::atan(t * std::pow((1.0 - es) / (1.0 + es), e_ / 2.0));
        if (std::abs(next - phi) < 1e-14) {
            phi = next;
            break;
        }
        phi = next;
    }
    return {(theta / n_ + lon0_rad_) / kDegToRad, phi / kDegToRad};
}

}  // namespace spp
