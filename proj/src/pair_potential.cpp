#include "rydsim/pair_potential.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

namespace rydsim {

void DressingParams::validate() const {
    if (!(rabi > 0.0)) throw ConfigError("dressing: Rabi frequency must be > 0");
    if (detuning == 0.0) throw ConfigError("dressing: detuning must be nonzero");
    if (!(forster_defect > 0.0)) throw ConfigError("dressing: Forster defect must be > 0");
    if (!(c3 > 0.0)) throw ConfigError("dressing: C3 must be > 0");
    if (angular_factor) {
        for (int i = 0; i <= 32; ++i) {
            const double theta = std::numbers::pi * i / 32.0;
            const double f = angular_factor(theta);
            if (!std::isfinite(f) || f < 0.0 || f > 1.0)
                throw ConfigError("dressing: angular factor must map into [0, 1]");
        }
    }
}

double DressingParams::single_atom_shift() const {
    // Eigenvalue of [[0, Omega/2], [Omega/2, -Delta]] connected to the
    // bare state (energy 0 at Omega = 0).
    const double d = detuning;
    const double s = d > 0.0 ? 1.0 : -1.0;
    return 0.5 * (-d + s * std::sqrt(d * d + rabi * rabi));
}

double forster_pair_energy(double r, double theta, const DressingParams& params) {
    if (!(r > 0.0)) throw std::domain_error("forster_pair_energy: r must be > 0");
    const double c = params.angular(theta) * params.c3 / (r * r * r);
    const double df = params.forster_defect;
    return 0.5 * (df - std::sqrt(df * df + 4.0 * c * c));
}

namespace {

// Symmetric two-atom dressing Hamiltonian in the basis
// {|uu>, sym|ur>, |rr>} for a pair energy v on the doubly excited state.
Eigen::Matrix3d pair_hamiltonian(double v, const DressingParams& p) {
    const double g = p.rabi / std::sqrt(2.0);
    Eigen::Matrix3d h;
    h << 0.0, g, 0.0,
         g, -p.detuning, g,
         0.0, g, -2.0 * p.detuning + v;
    return h;
}

struct Branch {
    double value;
    Eigen::Vector3d vector;
};

Branch eigen_branch_nearest(const Eigen::Matrix3d& h, double target) {
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> solver(h);
    int best = 0;
    double best_d = std::abs(solver.eigenvalues()[0] - target);
    for (int i = 1; i < 3; ++i) {
        const double d = std::abs(solver.eigenvalues()[i] - target);
        if (d < best_d) {
            best = i;
            best_d = d;
        }
    }
    return {solver.eigenvalues()[best], solver.eigenvectors().col(best)};
}

Branch eigen_branch_max_overlap(const Eigen::Matrix3d& h, const Eigen::Vector3d& prev,
                                double* overlap_out) {
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> solver(h);
    int best = 0;
    double best_ov = std::abs(prev.dot(solver.eigenvectors().col(0)));
    for (int i = 1; i < 3; ++i) {
        const double ov = std::abs(prev.dot(solver.eigenvectors().col(i)));
        if (ov > best_ov) {
            best = i;
            best_ov = ov;
        }
    }
    *overlap_out = best_ov;
    return {solver.eigenvalues()[best], solver.eigenvectors().col(best)};
}

} // namespace

double dressed_interaction_exact(double r, double theta, const DressingParams& params) {
    if (!(r > 0.0)) throw std::domain_error("dressed_interaction_exact: r must be > 0");

    const double e1 = params.single_atom_shift();
    const double v_target = forster_pair_energy(r, theta, params);

    // Continuation from the separable point V_R = 0, where the dressed
    // pair eigenvalue is exactly 2*E1, toward V_R(r). Steps bisect until
    // the eigenvector overlap between consecutive points stays high.
    Branch branch = eigen_branch_nearest(pair_hamiltonian(0.0, params), 2.0 * e1);

    constexpr double min_overlap = 0.75;
    constexpr int max_bisections = 60;

    double u = 0.0; // continuation parameter, V = u * v_target
    while (u < 1.0) {
        double step = 1.0 - u;
        int depth = 0;
        for (;;) {
            double overlap = 0.0;
            const Branch trial = eigen_branch_max_overlap(
                pair_hamiltonian((u + step) * v_target, params), branch.vector, &overlap);
            if (overlap >= min_overlap) {
                branch = trial;
                u += step;
                break;
            }
            if (++depth > max_bisections)
                throw BranchAmbiguityError(
                    "dressed_interaction_exact: eigenvalue branch lost near V_R = " +
                    std::to_string((u + step) * v_target) +
                    " rad/us (near-degenerate crossing)");
            step *= 0.5;
        }
    }

    return branch.value - 2.0 * e1;
}

double softcore_from_pair_energy(double v_r, const DressingParams& params,
                                 double pole_guard) {
    const double d = params.detuning;
    if (std::abs(v_r - 2.0 * d) <= pole_guard * std::abs(d))
        throw ResonanceError(
            "dressed_interaction_softcore: V_R within the anti-blockade guard band "
            "around 2*Delta");
    return params.plateau() * v_r / (v_r - 2.0 * d);
}

double dressed_interaction_softcore(double r, double theta, const DressingParams& params,
                                    double pole_guard) {
    if (!(r > 0.0)) throw std::domain_error("dressed_interaction_softcore: r must be > 0");
    return softcore_from_pair_energy(forster_pair_energy(r, theta, params), params,
                                     pole_guard);
}

double interaction_range(const DressingParams& params, double theta) {
    const double target = std::abs(params.detuning);
    const double r_min = 1e-3;

    if (std::abs(forster_pair_energy(r_min, theta, params)) < target)
        throw NoRangeError("interaction_range: |Delta| exceeds the maximum pair energy");

    // |V_R| decreases monotonically in r; expand until below target.
    double r_max = 1.0;
    while (std::abs(forster_pair_energy(r_max, theta, params)) > target) {
        r_max *= 2.0;
        if (r_max > 1e6)
            throw NoRangeError("interaction_range: no root below r = 1e6 um");
    }

    double lo = r_min, hi = r_max;
    while ((hi - lo) > 1e-7 * hi) {
        const double mid = 0.5 * (lo + hi);
        if (std::abs(forster_pair_energy(mid, theta, params)) > target)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

PairPotentialCurve tabulate_potential(const DressingParams& params, double r_min,
                                      double r_max, int n_points, const std::string& method,
                                      double theta) {
    if (!(r_min > 0.0) || !(r_max > r_min) || n_points < 2)
        throw ConfigError("tabulate_potential: bad grid");
    if (method != "exact" && method != "softcore")
        throw ConfigError("tabulate_potential: method must be exact|softcore");

    PairPotentialCurve curve;
    curve.method = method;
    curve.radii.reserve(n_points);
    curve.values.reserve(n_points);
    const double lr0 = std::log(r_min), lr1 = std::log(r_max);
    for (int i = 0; i < n_points; ++i) {
        const double r = std::exp(lr0 + (lr1 - lr0) * i / (n_points - 1));
        curve.radii.push_back(r);
        curve.values.push_back(method == "exact"
                                   ? dressed_interaction_exact(r, theta, params)
                                   : dressed_interaction_softcore(r, theta, params));
    }
    return curve;
}

} // namespace rydsim
