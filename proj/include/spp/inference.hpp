#ifndef SPP_INFERENCE_HPP
#define SPP_INFERENCE_HPP

#include <map>
#include <string>
#include <vector>

#include "spp/pattern.hpp"
#include "spp/raster.hpp"
#include "spp/rng.hpp"

namespace spp {

struct TestResult {
    std::string method;
    double statistic{0.0};
    double p_value{1.0};
    double df{0.0};   // degrees of freedom (quadrat) or n (KS)
    long n_used{0};
    long n_dropped{0};
    std::map<std::string, std::vector<double>> details;
};

/// Chi-square test of CSR on an nx x ny division of the window bbox.
/// Expected counts come from masked-cell counting on the analysis grid;
/// quadrats with expected count < 0.5 are merged into their nearest
/// neighbouring quadrat to keep the chi-square approximation honest.
/// df = (#quadrats after merging) - 1.
TestResult quadrat_test(const PointPattern& p, int nx, int ny,
                        const PixelImage& grid);

/// Spatial Kolmogorov-Smirnov test of CSR against a covariate: compares
/// the covariate's empirical CDF at the data points with its area-weighted
/// CDF over the masked cells. Data points with no covariate value are
/// dropped (counted in n_dropped).
TestResult ks_test_covariate(const PointPattern& p, const PixelImage& covariate);

struct KFunctionEstimate {
    std::vector<double> r;
    std::vector<double> khat;
    std::string correction{"translation"};
};

/// Translation-corrected Ripley K estimate on an increasing radius grid:
/// Khat(r) = (|A|/n^2) * sum_{i != j} 1{d_ij <= r} * |A| / |A n A_shift|,
/// with the set covariance evaluated on the masked grid.
KFunctionEstimate ripley_k(const PointPattern& p, const std::vector<double>& r_grid,
                           const PixelImage& grid);

struct Envelope {
    std::vector<double> r;
    std::vector<double> lower;
    std::vector<double> upper;
    int nsim{0};
};

/// Pointwise min/max envelope of the given K estimates (shared r grid).
Envelope envelope_of(const std::vector<KFunctionEstimate>& sims);

struct EnvelopeResult {
    Envelope envelope;
    KFunctionEstimate data_k;
    bool outside{false};  // data K exits the envelope somewhere on the grid
};

/// Envelope from nsim CSR simulations conditioned on n = p.n(); replicate
/// k uses RNG stream seed.stream + k, so the result is independent of
/// scheduling.
EnvelopeResult k_envelope(const PointPattern& p, int nsim,
                          const std::vector<double>& r_grid,
                          const PixelImage& grid, RngSeed seed);

/// Area of (window intersect window shifted by d), precomputed on the
/// masked grid for |d| up to max_displacement and interpolated bilinearly.
class SetCovariance {
public:
    SetCovariance(const PixelImage& grid, double max_displacement);

    double at(double dx, double dy) const;
    double area0() const { return area0_; }

private:
    int kx_, ky_;
    double dx_, dy_;
    double area0_;
    std::vector<double> table_;  // (2*ky_+1) x (2*kx_+1), row-major

    double tab(int i, int j) const {
        return table_[static_cast<std::size_t>(j + ky_) * (2 * kx_ + 1) + (i + kx_)];
    }
};

}  // namespace spp

#endif
