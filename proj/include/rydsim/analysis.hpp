#ifndef RYDSIM_ANALYSIS_HPP
#define RYDSIM_ANALYSIS_HPP

#include <optional>
#include <vector>

#include "rydsim/errors.hpp"

namespace rydsim {

/// Fringe fit P_up(alpha) = m + (C/2) cos(alpha - phi).
struct FringeFit {
    double contrast = 0.0;
    double contrast_err = 0.0;
    double phase = 0.0; // in (-pi, pi]
    double phase_err = 0.0;
    double offset = 0.5;
    double offset_err = 0.0;
    double residual_norm = 0.0;
    int n_points = 0;
    int dof = 0;
    bool phase_undefined = false; // C consistent with zero
};

/// Least squares on P_up(alpha); linear in (offset, C cos(phi)/2,
/// C sin(phi)/2). When `shots` is given, binomial variance weights are
/// used. Requires >= 4 distinct alpha spanning >= pi. Throws FitError on
/// degenerate grids; a vanishing contrast sets `phase_undefined` instead
/// of throwing.
FringeFit fit_fringe(const std::vector<double>& alpha, const std::vector<double>& p_up,
                     std::optional<long> shots = std::nullopt);

/// One-parameter linear fit y = slope * x (+ intercept).
struct LinearFit {
    double slope = 0.0;
    double slope_err = 0.0;
    double intercept = 0.0;
    double intercept_err = 0.0;
    double residual_norm = 0.0;
    double r_squared = 0.0;
    int n_points = 0;
    int dof = 0;
};

/// Twisting fit phi = -Q cos(theta) (+ optional constant offset).
/// Phases are unwrapped along the theta axis assuming |delta phi| < pi
/// between adjacent samples. Returns Q in `slope`. Requires >= 3 tilts
/// not all at cos(theta) = 0.
LinearFit fit_twisting(const std::vector<double>& theta, const std::vector<double>& phi,
                       bool with_offset = false);

/// Weighted linear fit Q = chi * tau_R + intercept; sigma_q optional.
/// Requires >= 2 distinct tau_R.
LinearFit fit_chi(const std::vector<double>& tau_r, const std::vector<double>& q,
                  const std::vector<double>& sigma_q = {});

/// Grid of fitted phases over (theta, position).
struct PhaseMap {
    std::vector<double> thetas;    // rad, strictly increasing
    std::vector<double> positions; // um, strictly increasing
    std::vector<double> phi;       // theta-major: phi[it * nx + ix]
    std::vector<double> contrast;  // same layout

    std::size_t index(std::size_t it, std::size_t ix) const {
        return it * positions.size() + ix;
    }
    void validate() const;
};

/// phi = 0 roots per position column, localized in theta by linear
/// interpolation between samples with opposite sign. `irregular` marks
/// columns whose root count is not the expected 1 or 3 (noise or no
/// crossing); they are reported, not fatal.
struct ContourColumn {
    double position = 0.0;
    std::vector<double> theta_roots;
    bool irregular = false;
};

std::vector<ContourColumn> zero_phase_contour(const PhaseMap& map);

/// Unwraps a phase series in place assuming |delta| < pi between
/// neighbors.
void unwrap_phases(std::vector<double>& phi);

} // namespace rydsim

#endif // RYDSIM_ANALYSIS_HPP
