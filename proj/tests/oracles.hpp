// Test-only reference implementations, kept independent of the library
// code paths they are used to check.
#ifndef SPP_TESTS_ORACLES_HPP
#define SPP_TESTS_ORACLES_HPP

#include <cmath>
#include <cstdint>
#include <numbers>
#include <vector>

namespace oracles {

/// Vincenty inverse: geodesic distance in kilometers between two lon/lat
/// points (degrees) on an ellipsoid given by semi-major axis (km) and
/// flattening.
inline double vincenty_km(double lon1, double lat1, double lon2, double lat2,
                          double a_km, double f) {
    const double rad = std::numbers::pi / 180.0;
    const double b = a_km * (1.0 - f);
    const double u1 = std::atan((1.0 - f) * std::tan(lat1 * rad));
    const double u2 = std::atan((1.0 - f) * std::tan(lat2 * rad));
    const double big_l = (lon2 - lon1) * rad;
    const double su1 = std::sin(u1), cu1 = std::cos(u1);
    const double su2 = std::sin(u2), cu2 = std::cos(u2);

    double lambda = big_l;
    double sin_sigma = 0.0, cos_sigma = 0.0, sigma = 0.0;
    double cos_sq_alpha = 0.0, cos_2sigma_m = 0.0;
    for (int it = 0; it < 200; ++it) {
        const double sl = std::sin(lambda), cl = std::cos(lambda);
        sin_sigma = std::sqrt((cu2 * sl) * (cu2 * sl) +
                              (cu1 * su2 - su1 * cu2 * cl) * (cu1 * su2 - su1 * cu2 * cl));
        if (sin_sigma == 0.0) return 0.0;
        cos_sigma = su1 * su2 + cu1 * cu2 * cl;
        sigma = std::atan2(sin_sigma, cos_sigma);
        const double sin_alpha = cu1 * cu2 * sl / sin_sigma;
        cos_sq_alpha = 1.0 - sin_alpha * sin_alpha;
        cos_2sigma_m = cos_sq_alpha != 0.0
                           ? cos_sigma - 2.0 * su1 * su2 / cos_sq_alpha
                           : 0.0;
        const double c = f / 16.0 * cos_sq_alpha * (4.0 + f * (4.0 - 3.0 * cos_sq_alpha));
        const double prev = lambda;
        lambda = big_l + (1.0 - c) * f * sin_alpha *
                             (sigma + c * sin_sigma *
                                          (cos_2sigma_m +
                                           c * cos_sigma *
                                               (-1.0 + 2.0 * cos_2sigma_m * cos_2sigma_m)));
        if (std::abs(lambda - prev) < 1e-14) break;
    }
    const double u_sq = cos_sq_alpha * (a_km * a_km - b * b) / (b * b);
    const double big_a =
        1.0 + u_sq / 16384.0 * (4096.0 + u_sq * (-768.0 + u_sq * (320.0 - 175.0 * u_sq)));
    const double big_b =
        u_sq / 1024.0 * (256.0 + u_sq * (-128.0 + u_sq * (74.0 - 47.0 * u_sq)));
    const double delta_sigma =
        big_b * sin_sigma *
        (cos_2sigma_m +
         big_b / 4.0 *
             (cos_sigma * (-1.0 + 2.0 * cos_2sigma_m * cos_2sigma_m) -
              big_b / 6.0 * cos_2sigma_m * (-3.0 + 4.0 * sin_sigma * sin_sigma) *
                  (-3.0 + 4.0 * cos_2sigma_m * cos_2sigma_m)));
    return b * big_a * (sigma - delta_sigma);
}

}  // namespace oracles

#endif
