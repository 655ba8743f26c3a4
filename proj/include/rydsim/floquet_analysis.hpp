#ifndef RYDSIM_FLOQUET_ANALYSIS_HPP
#define RYDSIM_FLOQUET_ANALYSIS_HPP

#include <vector>

#include "rydsim/geometry.hpp"
#include "rydsim/spin_engine.hpp"

namespace rydsim {

/// Effective transverse-field Ising parameters of the Floquet protocol.
/// Lambda and Lambda_eff are always recomputed from the fields.
struct FloquetParams {
    double chi = 0.0;      // rad/us
    double tau_r = 0.0;    // us
    double h = 0.0;        // rad/us
    double tau_x = 0.0;    // us
    double contrast = 1.0; // C

    void validate() const;

    double lambda() const;                     // chi tau_R / (h tau_X)
    double lambda_eff() const { return contrast * lambda(); }
    CollectiveParams collective() const {
        return {chi * tau_r, h * tau_x, contrast};
    }
};

struct FixedPoint {
    Vec3 position;
    bool stable = false;
};

/// Fixed points on the phi = 0 meridian. When the drive vanishes
/// (h tau_X = 0) the map degenerates to a pure twist whose fixed set is
/// the poles plus the whole s_z = 0 circle; `degenerate_family` flags
/// that case (points then holds the poles only).
struct FixedPointSet {
    std::vector<FixedPoint> points;
    bool degenerate_family = false;
    bool floquet_deviation_regime = false; // per-cycle angles > 0.5 rad
};

/// Static mean-field fixed points: a single paramagnetic point (1,0,0)
/// for Lambda_eff <= 1; for Lambda_eff > 1 the two ferromagnetic points
/// (1/Lambda_eff, 0, +-sqrt(1 - 1/Lambda_eff^2)) plus the now unstable
/// (1,0,0).
FixedPointSet fixed_points(double lambda_eff);

/// Numerical fixed points of the stroboscopic cycle map, restricted to
/// the x > 0 meridian around the paramagnetic axis (the inverted point
/// -x is a trivial fixed point of any such map and not part of the
/// bifurcation). Roots are located by bisection of the map's
/// y-deviation along the meridian plus damped iteration from the static
/// predictions; accepted points satisfy |M(s) - s| < 1e-8. Throws
/// SearchError if refinement fails to converge.
FixedPointSet map_fixed_points(const CollectiveParams& params);
FixedPointSet map_fixed_points(const FloquetParams& params);

/// Stability of a fixed point of the cycle map: eigenvalues of the
/// analytic 2x2 tangent map on the unit circle (within 1e-9) mean
/// elliptic/stable. Throws std::invalid_argument when the input is not a
/// fixed point (residual >= 1e-6).
bool stability(const Vec3& point, const CollectiveParams& params);

/// Residual |M(s) - s| of the cycle map.
double map_residual(const Vec3& point, const CollectiveParams& params);

/// Positions where the local interaction-to-drive balance crosses the
/// phase transition, i.e. roots of C(x) chi(x) tau_R - h tau_X with
/// linear interpolation between grid samples.
struct BifurcationScan {
    std::vector<double> critical_positions; // um
    bool all_ferromagnetic = false;
    bool all_paramagnetic = false;
};

BifurcationScan bifurcation_scan(const std::vector<double>& positions,
                                 const std::vector<double>& chi_profile,
                                 const std::vector<double>& contrast_profile,
                                 double tau_r, double h_tau_x);

} // namespace rydsim

#endif // RYDSIM_FLOQUET_ANALYSIS_HPP
