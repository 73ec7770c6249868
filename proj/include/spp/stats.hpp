#ifndef SPP_STATS_HPP
#define SPP_STATS_HPP

namespace spp {

/// P(chi^2_df > x).
double chi_squared_sf(double x, double df);

/// Two-sided normal tail: 2 * (1 - Phi(|z|)).
double normal_two_sided_p(double z);

/// Asymptotic Kolmogorov distribution tail P(K > x) for x = sqrt(n) * D,
/// series truncated at 100 terms.
double kolmogorov_sf(double x);

}  // namespace spp

#endif
