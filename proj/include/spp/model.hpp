#ifndef SPP_MODEL_HPP
#define SPP_MODEL_HPP

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "spp/pattern.hpp"
#include "spp/raster.hpp"

namespace spp {

/// One model covariate: a raster plus whether the formula takes its log.
struct CovariateImage {
    std::string name;
    PixelImage image;
    bool log_transform{false};

    std::string term_name() const {
        return log_transform ? "log(" + name + ")" : name;
    }
};

/// Berman-Turner quadrature: data points plus masked cell centers as
/// dummies. The weight of each quadrature point is cell_area / m where m
/// counts the quadrature points sharing its cell, so the weights sum to
/// the masked area.
struct QuadratureScheme {
    std::vector<PlanarPoint> points;      // data first, then dummies
    std::vector<std::uint8_t> is_data;
    Eigen::VectorXd weights;              // km^2
    Eigen::MatrixXd design;               // column 0 is the constant 1
    std::vector<std::string> names;       // "(Intercept)", then term names
    long n_data{0};
    long n_dropped_data{0};               // data points without covariates
    long n_dropped_dummy{0};              // masked cells without covariates
    double total_weight{0.0};
};

QuadratureScheme build_quadrature(const PointPattern& data,
                                  const std::vector<CovariateImage>& covariates,
                                  const PixelImage& grid);

struct FittedModel {
    std::vector<std::string> names;
    Eigen::VectorXd beta;
    Eigen::MatrixXd covariance;
    Eigen::VectorXd se;
    Eigen::VectorXd p_values;
    double loglik{0.0};
    bool converged{false};
    int iterations{0};
};

/// Raised when the design matrix is rank deficient; names the collinear
/// columns.
struct RankDeficiencyError : std::runtime_error {
    explicit RankDeficiencyError(const std::string& what,
                                 std::vector<std::string> columns)
        : std::runtime_error(what), collinear(std::move(columns)) {}
    std::vector<std::string> collinear;
};

/// Maximum pseudolikelihood fit of log lambda(u) = Z(u) beta by IRLS
/// (Fisher scoring for the weighted Poisson regression). Non-convergence
/// after the iteration cap returns converged = false rather than throwing.
FittedModel fit_ppm(const QuadratureScheme& q);

/// Two-sided Wald p-value.
double wald_pvalue(double beta, double se);

struct StepwiseRemoval {
    std::string name;
    double p_value;  // p-value at removal
};

struct StepwiseResult {
    FittedModel model;
    std::vector<StepwiseRemoval> trace;
    std::vector<std::string> kept;  // non-intercept terms remaining
};

/// Backward elimination: refit repeatedly, dropping the least significant
/// non-intercept term while its p-value exceeds alpha.
StepwiseResult stepwise_backward(const QuadratureScheme& q, double alpha);

/// exp(z . beta) for one covariate row (z[0] = 1).
double predict_at(const FittedModel& m, const std::vector<double>& z);

/// Model intensity over the grid; cells with missing covariates stay
/// undefined. Covariates must carry the same terms the model was fit with.
PixelImage predict_intensity(const FittedModel& m,
                             const std::vector<CovariateImage>& covariates,
                             const PixelImage& grid);

enum class ResidualKind {
    raw,                  // lambda* - lambda_hat
    pearson,              // (lambda* - lambda_hat) / lambda_hat
    pearson_conventional  // (lambda* - lambda_hat) / sqrt(lambda_hat)
};

/// Cell-wise residual image; cells where lambda_hat <= 0 under a ratio
/// kind become missing.
PixelImage residuals(const PixelImage& lambda_star, const PixelImage& lambda_hat,
                     ResidualKind kind);

/// Analytic d lambda_hat / d z_j = beta_j * lambda_hat at covariate row z.
double intensity_partial(const FittedModel& m, const std::vector<double>& z, int j);

}  // namespace spp

#endif
