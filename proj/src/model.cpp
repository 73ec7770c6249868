#include "spp/model.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "spp/stats.hpp"

namespace spp {

namespace {

// Transformed covariate value at p, or nan when undefined (missing cell,
// or log of a non-positive value).
double covariate_at(const CovariateImage& cov, PlanarPoint p) {
    const auto v = cov.image.lookup(p);
    if (!v) return std::numeric_limits<double>::quiet_NaN();
    if (!cov.log_transform) return *v;
    return *v > 0.0 ? std::log(*v) : std::numeric_limits<double>::quiet_NaN();
}

FittedModel fit_ppm_columns(const QuadratureScheme& q,
                            const std::vector<int>& cols);

}  // namespace

QuadratureScheme build_quadrature(const PointPattern& data,
                                  const std::vector<CovariateImage>& covariates,
                                  const PixelImage& grid) {
    QuadratureScheme q;
    q.names.push_back("(Intercept)");
    for (const auto& c : covariates) q.names.push_back(c.term_name());
    const int p = static_cast<int>(covariates.size()) + 1;

    // Data points that sit in a masked cell and have every covariate.
    std::vector<PlanarPoint> data_pts;
    std::vector<std::vector<double>> data_rows;
    std::vector<long> per_cell(static_cast<std::size_t>(grid.nx()) * grid.ny(), 0);
    for (const auto& pt : data.points()) {
        const auto cell = grid.cell_index(pt);
        if (!cell || !grid.masked(cell->first, cell->second)) {
            ++q.n_dropped_data;
            continue;
        }
        std::vector<double> row(p, 1.0);
        bool ok = true;
        for (std::size_t c = 0; c < covariates.size(); ++c) {
            row[c + 1] = covariate_at(covariates[c], pt);
            if (std::isnan(row[c + 1])) {
                ok = false;
                break;
            }
        }
        if (!ok) {
            ++q.n_dropped_data;
            continue;
        }
        data_pts.push_back(pt);
        data_rows.push_back(std::move(row));
        ++per_cell[grid.index(cell->first, cell->second)];
    }

    // Dummy points at masked cell centers with defined covariates.
    std::vector<PlanarPoint> dummy_pts;
    std::vector<std::vector<double>> dummy_rows;
    std::vector<double> dummy_m;
    for (int iy = 0; iy < grid.ny(); ++iy) {
        for (int ix = 0; ix < grid.nx(); ++ix) {
            if (!grid.masked(ix, iy)) continue;
            const PlanarPoint c = grid.cell_center(ix, iy);
            std::vector<double> row(p, 1.0);
            bool ok = true;
            for (std::size_t k = 0; k < covariates.size(); ++k) {
                row[k + 1] = covariate_at(covariates[k], c);
                if (std::isnan(row[k + 1])) {
                    ok = false;
                    break;
                }
            }
            if (!ok) {
                ++q.n_dropped_dummy;
                continue;
            }
            dummy_pts.push_back(c);
            dummy_rows.push_back(std::move(row));
            dummy_m.push_back(1.0 + static_cast<double>(per_cell[grid.index(ix, iy)]));
        }
    }

    const std::size_t total = data_pts.size() + dummy_pts.size();
    q.points.reserve(total);
    q.is_data.reserve(total);
    q.weights.resize(static_cast<Eigen::Index>(total));
    q.design.resize(static_cast<Eigen::Index>(total), p);
    q.n_data = static_cast<long>(data_pts.size());

    const double cell_area = grid.cell_area();
    Eigen::Index r = 0;
    for (std::size_t i = 0; i < data_pts.size(); ++i, ++r) {
        q.points.push_back(data_pts[i]);
        q.is_data.push_back(1);
        const auto cell = grid.cell_index(data_pts[i]);
        const double m =
            1.0 + static_cast<double>(per_cell[grid.index(cell->first, cell->second)]);
        q.weights(r) = cell_area / m;
        for (int c = 0; c < p; ++c) q.design(r, c) = data_rows[i][c];
    }
    for (std::size_t i = 0; i < dummy_pts.size(); ++i, ++r) {
        q.points.push_back(dummy_pts[i]);
        q.is_data.push_back(0);
        q.weights(r) = cell_area / dummy_m[i];
        for (int c = 0; c < p; ++c) q.design(r, c) = dummy_rows[i][c];
    }
    q.total_weight = q.weights.sum();
    return q;
}

namespace {

FittedModel fit_ppm_columns(const QuadratureScheme& q, const std::vector<int>& cols) {
    const Eigen::Index n = q.design.rows();
    const int p = static_cast<int>(cols.size());
    if (n == 0) throw std::invalid_argument("fit_ppm: empty quadrature");

    Eigen::MatrixXd Z(n, p);
    for (int c = 0; c < p; ++c) Z.col(c) = q.design.col(cols[c]);

    // Response y = 1/w at data points, 0 at dummies.
    Eigen::VectorXd y = Eigen::VectorXd::Zero(n);
    for (Eigen::Index i = 0; i < n; ++i)
        if (q.is_data[static_cast<std::size_t>(i)]) y(i) = 1.0 / q.weights(i);

    // Rank check on the weight-scaled design, naming offending columns.
    {
        Eigen::MatrixXd scaled = q.weights.array().sqrt().matrix().asDiagonal() * Z;
        Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(scaled);
        qr.setThreshold(1e-10);
        if (qr.rank() < p) {
            std::vector<std::string> bad;
            const auto& perm = qr.colsPermutation().indices();
            for (int c = qr.rank(); c < p; ++c)
                bad.push_back(q.names[cols[perm(c)]]);
            std::string msg = "fit_ppm: design is rank deficient; collinear columns:";
            for (const auto& b : bad) msg += " " + b;
            throw RankDeficiencyError(msg, std::move(bad));
        }
    }

    FittedModel model;
    for (int c : cols) model.names.push_back(q.names[c]);

    const double n_data = static_cast<double>(q.n_data);
    Eigen::VectorXd beta = Eigen::VectorXd::Zero(p);
    beta(0) = n_data > 0
                  ? std::log(n_data / q.total_weight)
                  : -1.0;  // no data: start low, the cap will flag divergence

    auto objective = [&](const Eigen::VectorXd& b) {
        const Eigen::ArrayXd eta = (Z * b).array().min(500.0);
        const Eigen::ArrayXd lam = eta.exp();
        double ll = 0.0;
        for (Eigen::Index i = 0; i < n; ++i) {
            if (q.is_data[static_cast<std::size_t>(i)]) ll += eta(i);
            ll -= q.weights(i) * lam(i);
        }
        return ll;
    };

    constexpr int kMaxIter = 100;
    constexpr double kTol = 1e-10;
    double prev = objective(beta);
    Eigen::MatrixXd fisher(p, p);
    for (int iter = 1; iter <= kMaxIter; ++iter) {
        model.iterations = iter;
        const Eigen::ArrayXd eta = (Z * beta).array().min(500.0);
        const Eigen::ArrayXd lam = eta.exp();
        const Eigen::ArrayXd w_irls = q.weights.array() * lam;  // Fisher weights
        // Working response z = eta + (y - lam)/lam.
        const Eigen::ArrayXd work = eta + (y.array() - lam) / lam;

        fisher = Z.transpose() * w_irls.matrix().asDiagonal() * Z;
        const Eigen::VectorXd rhs = Z.transpose() * (w_irls * work).matrix();
        Eigen::LDLT<Eigen::MatrixXd> ldlt(fisher);
        if (ldlt.info() != Eigen::Success) break;
        const Eigen::VectorXd next = ldlt.solve(rhs);
        if (!next.allFinite()) break;

        beta = next;
        const double cur = objective(beta);

        // Stationarity check on the score itself; a flat objective alone is
        // not enough (a likelihood without a maximum, e.g. no data points,
        // must run into the iteration cap unconverged).
        const Eigen::ArrayXd lam_new = (Z * beta).array().min(500.0).exp();
        const Eigen::VectorXd score =
            Z.transpose() * (q.weights.array() * (y.array() - lam_new)).matrix();
        const double score_scale = std::max(1.0, n_data);
        if (std::abs(cur - prev) <= kTol * (std::abs(prev) + 1.0) &&
            score.lpNorm<Eigen::Infinity>() < 1e-9 * score_scale) {
            model.converged = true;
            prev = cur;
            break;
        }
        prev = cur;
    }

    model.beta = beta;
    model.loglik = prev;
    {
        const Eigen::ArrayXd lam = (Z * beta).array().min(500.0).exp();
        const Eigen::ArrayXd w_irls = q.weights.array() * lam;
        fisher = Z.transpose() * w_irls.matrix().asDiagonal() * Z;
    }
    model.covariance = fisher.ldlt().solve(Eigen::MatrixXd::Identity(p, p));
    model.se.resize(p);
    model.p_values.resize(p);
    for (int c = 0; c < p; ++c) {
        const double var = model.covariance(c, c);
        model.se(c) = var > 0.0 ? std::sqrt(var) : std::numeric_limits<double>::quiet_NaN();
        model.p_values(c) = model.se(c) > 0.0
                                ? wald_pvalue(beta(c), model.se(c))
                                : std::numeric_limits<double>::quiet_NaN();
    }
    return model;
}

}  // namespace

FittedModel fit_ppm(const QuadratureScheme& q) {
    std::vector<int> cols(static_cast<std::size_t>(q.design.cols()));
    for (std::size_t c = 0; c < cols.size(); ++c) cols[c] = static_cast<int>(c);
    return fit_ppm_columns(q, cols);
}

double wald_pvalue(double beta, double se) {
    if (!(se > 0.0)) throw std::invalid_argument("wald_pvalue: se must be > 0");
    return normal_two_sided_p(beta / se);
}

StepwiseResult stepwise_backward(const QuadratureScheme& q, double alpha) {
    if (!(alpha > 0.0 && alpha <= 1.0))
        throw std::invalid_argument("stepwise_backward: alpha must be in (0,1]");

    std::vector<int> cols(static_cast<std::size_t>(q.design.cols()));
    for (std::size_t c = 0; c < cols.size(); ++c) cols[c] = static_cast<int>(c);

    StepwiseResult result;
    result.model = fit_ppm_columns(q, cols);
    for (;;) {
        int worst = -1;  // index into cols, skipping the intercept
        for (std::size_t c = 1; c < cols.size(); ++c) {
            const double p = result.model.p_values(static_cast<Eigen::Index>(c));
            if (!(p > alpha)) continue;
            if (worst < 0 ||
                p > result.model.p_values(static_cast<Eigen::Index>(worst)))
                worst = static_cast<int>(c);
        }
        if (worst < 0 || cols.size() <= 1) break;
        result.trace.push_back(
            {result.model.names[static_cast<std::size_t>(worst)],
             result.model.p_values(static_cast<Eigen::Index>(worst))});
        cols.erase(cols.begin() + worst);
        result.model = fit_ppm_columns(q, cols);
    }
    for (std::size_t c = 1; c < cols.size(); ++c)
        result.kept.push_back(q.names[cols[c]]);
    return result;
}

double predict_at(const FittedModel& m, const std::vector<double>& z) {
    if (static_cast<Eigen::Index>(z.size()) != m.beta.size())
        throw std::invalid_argument("predict_at: covariate row length mismatch");
    double eta = 0.0;
    for (std::size_t j = 0; j < z.size(); ++j)
        eta += z[j] * m.beta(static_cast<Eigen::Index>(j));
    return std::exp(eta);
}

PixelImage predict_intensity(const FittedModel& m,
                             const std::vector<CovariateImage>& covariates,
                             const PixelImage& grid) {
    if (static_cast<Eigen::Index>(covariates.size()) + 1 != m.beta.size())
        throw std::invalid_argument("predict_intensity: covariates do not match model");
    for (std::size_t c = 0; c < covariates.size(); ++c)
        if (covariates[c].term_name() != m.names[c + 1])
            throw std::invalid_argument("predict_intensity: term mismatch: " +
                                        covariates[c].term_name() + " vs " +
                                        m.names[c + 1]);

    PixelImage out = PixelImage::like(grid);
    for (int iy = 0; iy < grid.ny(); ++iy) {
        for (int ix = 0; ix < grid.nx(); ++ix) {
            if (!grid.masked(ix, iy)) continue;
            const PlanarPoint c = grid.cell_center(ix, iy);
            double eta = m.beta(0);
            bool ok = true;
            for (std::size_t k = 0; k < covariates.size(); ++k) {
                const double z = covariate_at(covariates[k], c);
                if (std::isnan(z)) {
                    ok = false;
                    break;
                }
                eta += z * m.beta(static_cast<Eigen::Index>(k) + 1);
            }
            if (ok)
                out.set_value(ix, iy, std::exp(eta));
            else
                out.set_missing(ix, iy);
        }
    }
    return out;
}

PixelImage residuals(const PixelImage& lambda_star, const PixelImage& lambda_hat,
                     ResidualKind kind) {
    if (lambda_star.nx() != lambda_hat.nx() || lambda_star.ny() != lambda_hat.ny() ||
        lambda_star.dx() != lambda_hat.dx() || lambda_star.dy() != lambda_hat.dy())
        throw std::invalid_argument("residuals: images on different grids");

    PixelImage out = PixelImage::like(lambda_star);
    for (int iy = 0; iy < out.ny(); ++iy) {
        for (int ix = 0; ix < out.nx(); ++ix) {
            if (!out.masked(ix, iy)) continue;
            if (!lambda_star.defined(ix, iy) || !lambda_hat.defined(ix, iy)) {
                out.set_missing(ix, iy);
                continue;
            }
            const double s = lambda_star.value(ix, iy) - lambda_hat.value(ix, iy);
            const double lh = lambda_hat.value(ix, iy);
            switch (kind) {
                case ResidualKind::raw:
                    out.set_value(ix, iy, s);
                    break;
                case ResidualKind::pearson:
                    if (lh > 0.0)
                        out.set_value(ix, iy, s / lh);
                    else
                        out.set_missing(ix, iy);
                    break;
                case ResidualKind::pearson_conventional:
                    if (lh > 0.0)
                        out.set_value(ix, iy, s / std::sqrt(lh));
                    else
                        out.set_missing(ix, iy);
                    break;
            }
        }
    }
    return out;
}

double intensity_partial(const FittedModel& m, const std::vector<double>& z, int j) {
    if (j < 0 || j >= static_cast<int>(z.size()))
        throw std::invalid_argument("intensity_partial: bad index");
    return m.beta(j) * predict_at(m, z);
}

}  // namespace spp
