#include "spp/stats.hpp"

#include <algorithm>
#include <boost/math/distributions/chi_squared.hpp>
#include <cmath>
#include <numbers>

namespace spp {

double chi_squared_sf(double x, double df) {
    if (x <= 0.0) return 1.0;
    const boost::math::chi_squared dist(df);
    return boost::math::cdf(boost::math::complement(dist, x));
}

double normal_two_sided_p(double z) {
    return std::erfc(std::abs(z) / std::numbers::sqrt2);
}

double kolmogorov_sf(double x) {
    if (x <= 0.0) return 1.0;
    constexpr int kMaxTerms = 100;
    if (x < 1.0) {
        // Jacobi theta form converges fast for small arguments.
        double cdf = 0.0;
        const double c = std::numbers::pi * std::numbers::pi / (8.0 * x * x);
        for (int k = 1; k <= kMaxTerms; ++k) {
            const double term = std::exp(-c * (2.0 * k - 1.0) * (2.0 * k - 1.0));
            cdf += term;
            if (term < 1e-18 * cdf) break;
        }
        cdf *= std::sqrt(2.0 * std::numbers::pi) / x;
        return std::clamp(1.0 - cdf, 0.0, 1.0);
    }
    double sf = 0.0;
    double sign = 1.0;
    for (int k = 1; k <= kMaxTerms; ++k) {
        const double term = std::exp(-2.0 * k * k * x * x);
        sf += sign * term;
        sign = -sign;
        if (term < 1e-18 * std::abs(sf)) break;
    }
    return std::clamp(2.0 * sf, 0.0, 1.0);
}

}  // namespace spp
