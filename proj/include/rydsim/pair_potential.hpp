#ifndef RYDSIM_PAIR_POTENTIAL_HPP
#define RYDSIM_PAIR_POTENTIAL_HPP

#include <functional>
#include <string>
#include <vector>

#include "rydsim/errors.hpp"
#include "rydsim/units.hpp"

namespace rydsim {

/// Laser/atomic parameters defining the dressed pair potential.
///
/// The Rydberg-Rydberg interaction is modeled with two pair channels: the
/// doubly excited PP state and a nearby SS' state split by the Forster
/// defect, coupled by a dipole-dipole matrix element c = f(theta)*C3/r^3.
/// All frequencies are angular, rad/us; lengths are um.
struct DressingParams {
    double rabi = mhz_to_angular(1.9);            // Omega, rad/us
    double detuning = mhz_to_angular(21.0);       // Delta, rad/us, signed
    double forster_defect = mhz_to_angular(42.0); // Delta_F, rad/us, > 0
    double c3 = mhz_to_angular(3700.0);           // rad/us * um^3

    // Angular factor for P-state dressing, f(theta) in [0, 1]. Default
    // isotropic. theta is the polar angle of the interatomic axis.
    std::function<double(double)> angular_factor;

    double angular(double theta) const {
        return angular_factor ? angular_factor(theta) : 1.0;
    }

    /// Throws ConfigError if any invariant is violated (f is checked on a
    /// coarse theta grid).
    void validate() const;

    /// Blockaded plateau value J0 = -Omega^4/(8 Delta^3). Negative
    /// (ferromagnetic) for Delta > 0.
    double plateau() const {
        return -rabi * rabi * rabi * rabi / (8.0 * detuning * detuning * detuning);
    }

    /// Single-atom dressed energy of the branch connected to the bare
    /// spin-up state (the ac Stark shift, ~ Omega^2/(4 Delta)).
    double single_atom_shift() const;

    /// Van der Waals coefficient of the long-range tail of V_R,
    /// C6 = (f C3)^2 / Delta_F.
    double c6(double theta = 0.0) const {
        const double c3_eff = angular(theta) * c3;
        return c3_eff * c3_eff / forster_defect;
    }
};

/// Rydberg pair energy V_R(r, theta): the eigenvalue of the two-channel
/// Hamiltonian [[0, c], [c, Delta_F]] adiabatically connected to the PP
/// pair state, V_R = (Delta_F - sqrt(Delta_F^2 + 4 c^2)) / 2 <= 0.
double forster_pair_energy(double r, double theta, const DressingParams& params);

/// Dressed ground-state interaction J(r) = E2(r) - 2 E1 from exact
/// diagonalization of the symmetric two-atom dressing Hamiltonian, with
/// the E2 branch tracked by adiabatic continuation in V_R from r = inf.
/// Throws BranchAmbiguityError if the branch cannot be followed through a
/// near-degenerate crossing.
double dressed_interaction_exact(double r, double theta, const DressingParams& params);

/// Fourth-order (soft-core) closed form,
///   J(r) = -Omega^4/(8 Delta^3) * V_R / (V_R - 2 Delta).
/// Plateaus at J0 inside the blockade radius and falls off as r^-6
/// outside. Throws ResonanceError within the anti-blockade guard band
/// |V_R - 2 Delta| <= pole_guard * |Delta| (only reachable for Delta < 0).
double dressed_interaction_softcore(double r, double theta, const DressingParams& params,
                                    double pole_guard = 1e-3);

/// Soft-core value for an externally supplied pair energy V_R.
double softcore_from_pair_energy(double v_r, const DressingParams& params,
                                 double pole_guard = 1e-3);

/// Interaction range r_c, the root of |V_R(r_c, theta)| = |Delta|.
/// Bracketing + bisection, relative tolerance 1e-6. Throws NoRangeError
/// if the detuning exceeds the maximum available pair energy.
double interaction_range(const DressingParams& params, double theta = 0.0);

/// Tabulated potential curve.
struct PairPotentialCurve {
    std::vector<double> radii;  // um, strictly increasing
    std::vector<double> values; // J(r), rad/us
    std::string method;         // "exact" | "softcore"
};

/// Tabulates J(r) on a log-spaced grid r in [r_min, r_max].
PairPotentialCurve tabulate_potential(const DressingParams& params, double r_min,
                                      double r_max, int n_points, const std::string& method,
                                      double theta = 0.0);

} // namespace rydsim

#endif // RYDSIM_PAIR_POTENTIAL_HPP
