#include "rydsim/floquet_analysis.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numbers>

#include "rydsim/errors.hpp"

namespace rydsim {

void FloquetParams::validate() const {
    if (tau_r < 0.0 || tau_x < 0.0)
        throw ConfigError("floquet params: durations must be >= 0");
    if (contrast < 0.0 || contrast > 1.0)
        throw ConfigError("floquet params: contrast must lie in [0, 1]");
}

double FloquetParams::lambda() const {
    const double drive = h * tau_x;
    if (drive == 0.0)
        throw ConfigError("floquet params: Lambda undefined for h tau_X = 0");
    return chi * tau_r / drive;
}

FixedPointSet fixed_points(double lambda_eff) {
    if (!std::isfinite(lambda_eff))
        throw std::domain_error("fixed_points: Lambda_eff must be finite");

    FixedPointSet set;
    if (lambda_eff <= 1.0) {
        set.points.push_back({Vec3{1.0, 0.0, 0.0}, true});
        return set;
    }
    const double sx = 1.0 / lambda_eff;
    const double sz = std::sqrt(1.0 - sx * sx);
    set.points.push_back({Vec3{sx, 0.0, sz}, true});
    set.points.push_back({Vec3{sx, 0.0, -sz}, true});
    set.points.push_back({Vec3{1.0, 0.0, 0.0}, false});
    return set;
}

namespace {

using Mat3 = Eigen::Matrix3d;
using EVec3 = Eigen::Vector3d;

EVec3 to_eigen(const Vec3& v) { return {v.x, v.y, v.z}; }

Mat3 rot_z(double a) {
    Mat3 m;
    m << std::cos(a), -std::sin(a), 0.0, std::sin(a), std::cos(a), 0.0, 0.0, 0.0, 1.0;
    return m;
}

Mat3 rot_x(double a) {
    Mat3 m;
    m << 1.0, 0.0, 0.0, 0.0, std::cos(a), -std::sin(a), 0.0, std::sin(a), std::cos(a);
    return m;
}

Mat3 drot_z(double a) {
    Mat3 m;
    m << -std::sin(a), -std::cos(a), 0.0, std::cos(a), -std::sin(a), 0.0, 0.0, 0.0, 0.0;
    return m;
}

// Jacobian of the half twist T(s) = R_z(g s_z) s at s.
Mat3 half_twist_jacobian(const EVec3& s, double g) {
    const double a = g * s.z();
    Mat3 j = rot_z(a);
    j.col(2) += g * (drot_z(a) * s); // d/ds_z of the rotation angle
    return j;
}

// Analytic Jacobian of the full cycle map at s.
Mat3 cycle_jacobian(const CollectiveParams& p, const EVec3& s) {
    const double g = -0.5 * p.contrast * p.chi_tau_r;
    const Mat3 x = rot_x(-p.h_tau_x);
    const EVec3 s1 = rot_z(g * s.z()) * s;
    const EVec3 s2 = x * s1;
    return half_twist_jacobian(s2, g) * x * half_twist_jacobian(s, g);
}

} // namespace

double map_residual(const Vec3& point, const CollectiveParams& params) {
    const Vec3 s = point.normalized();
    return (collective_cycle_map(params, s) - s).norm();
}

bool stability(const Vec3& point, const CollectiveParams& params) {
    if (map_residual(point, params) >= 1e-6)
        throw std::invalid_argument("stability: input is not a fixed point of the map");

    const EVec3 s = to_eigen(point.normalized());
    // Tangent basis at s.
    EVec3 e1 = s.cross(EVec3::UnitZ());
    if (e1.norm() < 1e-8) e1 = s.cross(EVec3::UnitX());
    e1.normalize();
    const EVec3 e2 = s.cross(e1);

    const Mat3 j3 = cycle_jacobian(params, s);
    Eigen::Matrix2d t;
    t << e1.dot(j3 * e1), e1.dot(j3 * e2), e2.dot(j3 * e1), e2.dot(j3 * e2);

    const Eigen::Vector2cd eigs = t.eigenvalues();
    const double m0 = std::abs(eigs[0]), m1 = std::abs(eigs[1]);
    return std::max(m0, m1) <= 1.0 + 1e-9;
}

namespace {

// Damped fixed-point iteration; returns true on convergence.
bool damped_refine(const CollectiveParams& p, Vec3& s, double* last_residual) {
    double gamma = 0.5;
    for (int it = 0; it < 20000; ++it) {
        const Vec3 m = collective_cycle_map(p, s);
        const Vec3 d = m - s;
        *last_residual = d.norm();
        if (*last_residual < 1e-12) return true;
        s = (s + d * gamma).normalized();
    }
    return *last_residual < 1e-8;
}

} // namespace

FixedPointSet map_fixed_points(const CollectiveParams& params) {
    FixedPointSet set;
    set.floquet_deviation_regime =
        std::abs(params.contrast * params.chi_tau_r) > 0.5 ||
        std::abs(params.h_tau_x) > 0.5;

    if (params.h_tau_x == 0.0) {
        // Pure twist: poles plus the whole s_z = 0 circle stay fixed.
        set.degenerate_family = true;
        set.points.push_back({Vec3{0.0, 0.0, 1.0}, true});
        set.points.push_back({Vec3{0.0, 0.0, -1.0}, true});
        return set;
    }

    std::vector<Vec3> found;
    // The paramagnetic axis is a fixed point for every Lambda: s_z = 0
    // kills the twist and the drive rotation fixes +x.
    found.push_back(Vec3{1.0, 0.0, 0.0});

    // Meridian scan: bracket sign changes of the map's y-deviation.
    auto meridian = [](double t) { return Vec3{std::sin(t), 0.0, std::cos(t)}; };
    auto f = [&](double t) { return collective_cycle_map(params, meridian(t)).y; };

    const int n_scan = 4096;
    const double t_lo = 1e-4, t_hi = std::numbers::pi - 1e-4;
    double prev_t = t_lo, prev_f = f(t_lo);
    for (int i = 1; i <= n_scan; ++i) {
        const double t = t_lo + (t_hi - t_lo) * i / n_scan;
        const double ft = f(t);
        if (prev_f == 0.0 || (prev_f < 0.0) != (ft < 0.0)) {
            double a = prev_t, b = t, fa = prev_f;
            for (int it = 0; it < 100; ++it) {
                const double mid = 0.5 * (a + b);
                const double fm = f(mid);
                if ((fa < 0.0) == (fm < 0.0)) {
                    a = mid;
                    fa = fm;
                } else {
                    b = mid;
                }
            }
            const Vec3 cand = meridian(0.5 * (a + b));
            if (map_residual(cand, params) < 1e-8) found.push_back(cand);
        }
        prev_t = t;
        prev_f = ft;
    }

    // Damped iteration from the static predictions picks up anything the
    // scan grid missed (and polishes).
    const double lam = params.lambda_eff();
    if (lam > 1.0) {
        for (double sign : {1.0, -1.0}) {
            Vec3 seed{1.0 / lam, 0.0, sign * std::sqrt(1.0 - 1.0 / (lam * lam))};
            double residual = 0.0;
            if (damped_refine(params, seed, &residual)) {
                found.push_back(seed);
            } else if (residual > 1e-8) {
                const bool have_offaxis = found.size() > 1;
                if (!have_offaxis)
                    throw SearchError(
                        "map_fixed_points: refinement did not converge, last residual " +
                        std::to_string(residual));
            }
        }
    }

    // Deduplicate.
    for (const Vec3& p : found) {
        bool dup = false;
        for (const auto& q : set.points)
            if ((p - q.position).norm() < 1e-5) dup = true;
        if (!dup) set.points.push_back({p, stability(p, params)});
    }

    // Order: off-axis points first by descending z, paramagnetic last.
    std::sort(set.points.begin(), set.points.end(), [](const FixedPoint& a, const FixedPoint& b) {
        return a.position.z > b.position.z;
    });
    return set;
}

FixedPointSet map_fixed_points(const FloquetParams& params) {
    params.validate();
    return map_fixed_points(params.collective());
}

BifurcationScan bifurcation_scan(const std::vector<double>& positions,
                                 const std::vector<double>& chi_profile,
                                 const std::vector<double>& contrast_profile,
                                 double tau_r, double h_tau_x) {
    const std::size_t n = positions.size();
    if (n < 2 || chi_profile.size() != n || contrast_profile.size() != n)
        throw ConfigError("bifurcation_scan: profiles must share the position grid");
    for (std::size_t i = 1; i < n; ++i)
        if (!(positions[i] > positions[i - 1]))
            throw ConfigError("bifurcation_scan: positions must be strictly increasing");

    auto balance = [&](std::size_t i) {
        return contrast_profile[i] * chi_profile[i] * tau_r - h_tau_x;
    };

    BifurcationScan scan;
    bool any_pos = false, any_neg = false;
    for (std::size_t i = 0; i + 1 < n; ++i) {
        const double f0 = balance(i), f1 = balance(i + 1);
        if (f0 > 0.0) any_pos = true;
        if (f0 < 0.0) any_neg = true;
        if (f0 == 0.0) {
            scan.critical_positions.push_back(positions[i]);
        } else if ((f0 < 0.0) != (f1 < 0.0)) {
            const double w = f0 / (f0 - f1);
            scan.critical_positions.push_back(positions[i] +
                                              w * (positions[i + 1] - positions[i]));
        }
    }
    const double fl = balance(n - 1);
    if (fl > 0.0) any_pos = true;
    if (fl < 0.0) any_neg = true;
    if (fl == 0.0) scan.critical_positions.push_back(positions[n - 1]);

    scan.all_ferromagnetic = scan.critical_positions.empty() && any_pos && !any_neg;
    scan.all_paramagnetic = scan.critical_positions.empty() && any_neg && !any_pos;
    return scan;
}

} // namespace rydsim
