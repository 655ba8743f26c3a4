#include "rydsim/analysis.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

namespace rydsim {

namespace {

double wrap_to_pi(double phi) {
    phi = std::remainder(phi, 2.0 * std::numbers::pi);
    if (phi <= -std::numbers::pi) phi += 2.0 * std::numbers::pi;
    return phi;
}

} // namespace

void unwrap_phases(std::vector<double>& phi) {
    for (std::size_t i = 1; i < phi.size(); ++i) {
        const double jump = phi[i] - phi[i - 1];
        phi[i] -= 2.0 * std::numbers::pi * std::round(jump / (2.0 * std::numbers::pi));
    }
}

FringeFit fit_fringe(const std::vector<double>& alpha, const std::vector<double>& p_up,
                     std::optional<long> shots) {
    const std::size_t n = alpha.size();
    if (p_up.size() != n) throw FitError("fit_fringe: alpha/p_up size mismatch");
    if (n < 4) throw FitError("fit_fringe: need at least 4 points");

    std::vector<double> sorted = alpha;
    std::sort(sorted.begin(), sorted.end());
    std::size_t distinct = 1;
    for (std::size_t i = 1; i < n; ++i)
        if (sorted[i] - sorted[i - 1] > 1e-12) ++distinct;
    if (distinct < 4) throw FitError("fit_fringe: need at least 4 distinct alpha");
    if (sorted.back() - sorted.front() < std::numbers::pi - 1e-9)
        throw FitError("fit_fringe: alpha grid must span at least pi");

    // Linear model P = m + a cos(alpha) + b sin(alpha).
    Eigen::MatrixXd x(n, 3);
    Eigen::VectorXd y(n), w(n);
    for (std::size_t i = 0; i < n; ++i) {
        x(i, 0) = 1.0;
        x(i, 1) = std::cos(alpha[i]);
        x(i, 2) = std::sin(alpha[i]);
        y(i) = p_up[i];
        if (shots) {
            // Binomial variance with a mildly regularized rate estimate.
            const double p = (p_up[i] * static_cast<double>(*shots) + 0.5) /
                             (static_cast<double>(*shots) + 1.0);
            w(i) = static_cast<double>(*shots) / (p * (1.0 - p));
        } else {
            w(i) = 1.0;
        }
    }

    const Eigen::MatrixXd xtw = x.transpose() * w.asDiagonal();
    const Eigen::Matrix3d normal = xtw * x;
    const Eigen::Vector3d beta = normal.ldlt().solve(xtw * y);
    Eigen::Matrix3d cov = normal.inverse();

    const Eigen::VectorXd resid = y - x * beta;
    const double ssr = (w.asDiagonal() * resid).dot(resid);
    const int dof = static_cast<int>(n) - 3;
    if (!shots) {
        // Scale covariance by the residual variance estimate.
        const double s2 = dof > 0 ? ssr / dof : 0.0;
        cov *= s2;
    }

    const double a = beta(1), b = beta(2);
    const double r2 = a * a + b * b;
    const double r = std::sqrt(r2);

    FringeFit fit;
    fit.n_points = static_cast<int>(n);
    fit.dof = dof;
    fit.offset = beta(0);
    fit.offset_err = std::sqrt(std::max(0.0, cov(0, 0)));
    fit.residual_norm = std::sqrt(resid.squaredNorm());
    fit.contrast = 2.0 * r;

    if (r2 > 0.0) {
        const double var_c =
            4.0 * (a * a * cov(1, 1) + b * b * cov(2, 2) + 2.0 * a * b * cov(1, 2)) / r2;
        const double var_p =
            (b * b * cov(1, 1) + a * a * cov(2, 2) - 2.0 * a * b * cov(1, 2)) / (r2 * r2);
        fit.contrast_err = std::sqrt(std::max(0.0, var_c));
        fit.phase_err = std::sqrt(std::max(0.0, var_p));
        fit.phase = wrap_to_pi(std::atan2(b, a));
    } else {
        fit.contrast_err = 2.0 * std::sqrt(std::max(0.0, 0.5 * (cov(1, 1) + cov(2, 2))));
        fit.phase = 0.0;
    }

    if (fit.contrast < 3.0 * fit.contrast_err || fit.contrast == 0.0) {
        fit.phase_undefined = true;
        fit.phase_err = std::numbers::pi;
    }

    if (fit.contrast > 1.0 + 3.0 * fit.contrast_err + 1e-9)
        throw FitError("fit_fringe: contrast exceeds 1 beyond 3 sigma");
    return fit;
}

namespace {

LinearFit weighted_line_fit(const std::vector<double>& x, const std::vector<double>& y,
                            const std::vector<double>& sigma, bool with_intercept,
                            bool known_sigma) {
    const std::size_t n = x.size();
    const int n_params = with_intercept ? 2 : 1;

    Eigen::MatrixXd design(n, n_params);
    Eigen::VectorXd rhs(n), w(n);
    for (std::size_t i = 0; i < n; ++i) {
        design(i, 0) = x[i];
        if (with_intercept) design(i, 1) = 1.0;
        rhs(i) = y[i];
        w(i) = sigma.empty() ? 1.0 : 1.0 / (sigma[i] * sigma[i]);
    }

    const Eigen::MatrixXd xtw = design.transpose() * w.asDiagonal();
    const Eigen::MatrixXd normal = xtw * design;
    const Eigen::VectorXd beta = normal.ldlt().solve(xtw * rhs);
    Eigen::MatrixXd cov = normal.inverse();

    const Eigen::VectorXd resid = rhs - design * beta;
    const double ssr = (w.asDiagonal() * resid).dot(resid);
    const int dof = static_cast<int>(n) - n_params;
    if (!known_sigma) cov *= dof > 0 ? ssr / dof : 0.0;

    const double y_mean = (w.asDiagonal() * rhs).sum() / w.sum();
    double sst = 0.0;
    for (std::size_t i = 0; i < n; ++i) sst += w(i) * (rhs(i) - y_mean) * (rhs(i) - y_mean);

    LinearFit fit;
    fit.slope = beta(0);
    fit.slope_err = std::sqrt(std::max(0.0, cov(0, 0)));
    if (with_intercept) {
        fit.intercept = beta(1);
        fit.intercept_err = std::sqrt(std::max(0.0, cov(1, 1)));
    }
    fit.residual_norm = std::sqrt(resid.squaredNorm());
    fit.r_squared = sst > 0.0 ? 1.0 - ssr / sst : 1.0;
    fit.n_points = static_cast<int>(n);
    fit.dof = dof;
    return fit;
}

} // namespace

LinearFit fit_twisting(const std::vector<double>& theta, const std::vector<double>& phi,
                       bool with_offset) {
    const std::size_t n = theta.size();
    if (phi.size() != n) throw FitError("fit_twisting: theta/phi size mismatch");
    if (n < 3) throw FitError("fit_twisting: need at least 3 tilt values");

    bool identifiable = false;
    for (double t : theta)
        if (std::abs(std::cos(t)) > 1e-9) identifiable = true;
    if (!identifiable)
        throw FitError("fit_twisting: all tilts have cos(theta) = 0, Q unidentifiable");

    // Sort by theta and unwrap the phase series along the tilt axis.
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return theta[a] < theta[b]; });
    std::vector<double> x(n), y(n);
    for (std::size_t i = 0; i < n; ++i) {
        x[i] = -std::cos(theta[order[i]]);
        y[i] = phi[order[i]];
    }
    unwrap_phases(y);
    // Pin the branch using the sample closest to the equator, where the
    // twisting phase itself is near zero.
    std::size_t pivot = 0;
    for (std::size_t i = 1; i < n; ++i)
        if (std::abs(x[i]) < std::abs(x[pivot])) pivot = i;
    const double branch =
        2.0 * std::numbers::pi * std::round(y[pivot] / (2.0 * std::numbers::pi));
    for (double& v : y) v -= branch;

    return weighted_line_fit(x, y, {}, with_offset, false);
}

LinearFit fit_chi(const std::vector<double>& tau_r, const std::vector<double>& q,
                  const std::vector<double>& sigma_q) {
    const std::size_t n = tau_r.size();
    if (q.size() != n) throw FitError("fit_chi: tau_R/Q size mismatch");
    if (!sigma_q.empty() && sigma_q.size() != n)
        throw FitError("fit_chi: sigma size mismatch");
    if (n < 2) throw FitError("fit_chi: need at least 2 interaction times");
    double span = 0.0;
    for (std::size_t i = 1; i < n; ++i)
        span = std::max(span, std::abs(tau_r[i] - tau_r[0]));
    if (span <= 0.0) throw FitError("fit_chi: need at least 2 distinct tau_R");

    return weighted_line_fit(tau_r, q, sigma_q, /*with_intercept=*/true,
                             /*known_sigma=*/!sigma_q.empty());
}

void PhaseMap::validate() const {
    if (thetas.size() < 2 || positions.size() < 2)
        throw ConfigError("phase map: need at least a 2x2 grid");
    for (std::size_t i = 1; i < thetas.size(); ++i)
        if (!(thetas[i] > thetas[i - 1]))
            throw ConfigError("phase map: theta axis must be strictly increasing");
    for (std::size_t i = 1; i < positions.size(); ++i)
        if (!(positions[i] > positions[i - 1]))
            throw ConfigError("phase map: position axis must be strictly increasing");
    if (phi.size() != thetas.size() * positions.size())
        throw ConfigError("phase map: phi grid size mismatch");
    if (!contrast.empty() && contrast.size() != phi.size())
        throw ConfigError("phase map: contrast grid size mismatch");
}

std::vector<ContourColumn> zero_phase_contour(const PhaseMap& map) {
    map.validate();
    const std::size_t nt = map.thetas.size();
    const std::size_t nx = map.positions.size();

    std::vector<ContourColumn> columns;
    columns.reserve(nx);
    for (std::size_t ix = 0; ix < nx; ++ix) {
        ContourColumn col;
        col.position = map.positions[ix];
        for (std::size_t it = 0; it + 1 < nt; ++it) {
            const double f0 = map.phi[map.index(it, ix)];
            const double f1 = map.phi[map.index(it + 1, ix)];
            if (f0 == 0.0) {
                col.theta_roots.push_back(map.thetas[it]);
            } else if ((f0 < 0.0) != (f1 < 0.0)) {
                const double w = f0 / (f0 - f1);
                col.theta_roots.push_back(map.thetas[it] +
                                          w * (map.thetas[it + 1] - map.thetas[it]));
            }
        }
        if (map.phi[map.index(nt - 1, ix)] == 0.0)
            col.theta_roots.push_back(map.thetas[nt - 1]);
        col.irregular = col.theta_roots.size() != 1 && col.theta_roots.size() != 3;
        columns.push_back(std::move(col));
    }
    return columns;
}

} // namespace rydsim
