#ifndef RYDSIM_CLOUD_HPP
#define RYDSIM_CLOUD_HPP

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "rydsim/geometry.hpp"
#include "rydsim/pair_potential.hpp"

namespace rydsim {

enum class CloudShape { Box, GaussianEllipsoid };

/// Sampling region. For Box, extent is the full side length per axis and
/// positions are uniform in [-extent/2, extent/2]. For GaussianEllipsoid,
/// extent holds the 1-sigma radii and `density` means peak density.
struct CloudGeometry {
    CloudShape shape = CloudShape::Box;
    Vec3 extent{10.0, 10.0, 10.0}; // um

    double volume() const; // effective volume such that N = rho * volume
};

struct AtomCloud {
    std::vector<Vec3> positions; // um
    double peak_density = 0.0;   // atoms / um^3
    CloudGeometry geometry;
    std::uint64_t rng_seed = 0;
    std::string temperature_tag = "23uK"; // metadata only, no dynamics

    std::size_t size() const { return positions.size(); }
};

/// Samples atom positions. If n_atoms == 0 the count is the rounded mean
/// rho * V. Deterministic for a fixed seed. Throws ConfigError if the
/// implied mean interatomic spacing falls below 0.01 um.
AtomCloud sample_cloud(const CloudGeometry& geometry, double density, std::size_t n_atoms,
                       std::uint64_t seed);

/// Dressing beam, Gaussian in Rabi amplitude along the cloud x axis:
/// Omega(x) = Omega0 * exp(-(x - center)^2 / w^2).
struct BeamProfile {
    double peak_rabi = 0.0; // rad/us; 0 means "uniform at params.rabi"
    double waist = 80.0;    // um
    double center = 0.0;    // um
    bool uniform = true;    // if true, Omega(x) = peak_rabi everywhere

    double local_rabi(double x) const {
        if (uniform) return peak_rabi;
        const double u = (x - center) / waist;
        return peak_rabi * std::exp(-u * u);
    }
};

/// How pair distances are measured when building couplings.
///   Open:         plain Euclidean distances, edge atoms see fewer neighbors.
///   PeriodicBulk: minimum-image distances in the box plus a uniform
///                 all-to-all compensation for the integrated J tail beyond
///                 L/2, emulating an atom deep inside a large cloud.
enum class CouplingMode { Open, PeriodicBulk };

struct CouplingMatrix {
    std::size_t n = 0;
    std::vector<double> j;           // row-major n x n, rad/us, zero diagonal
    std::vector<double> light_shift; // delta_i = Omega_i^2 / (4 Delta), rad/us

    double& at(std::size_t i, std::size_t k) { return j[i * n + k]; }
    double at(std::size_t i, std::size_t k) const { return j[i * n + k]; }

    /// Row sum over partners, sum_j J_ij.
    double row_sum(std::size_t i) const;

    /// Mean-field interaction strength implied by the couplings,
    /// chi = -(1/2) * mean_i sum_j J_ij.
    double mean_chi() const;

    void check_invariants() const; // symmetry, zero diagonal, single sign
};

struct CouplingOptions {
    CouplingMode mode = CouplingMode::Open;
    double chi_calibration = 1.0; // scalar multiplier on J_ij
    double min_distance = 1e-3;   // um, coincident-atom threshold
};

/// Pairwise couplings from the soft-core potential with local Rabi
/// frequencies: J_ij uses Omega_eff = sqrt(Omega_i * Omega_j) (the
/// interaction is quartic in Omega, so Omega_eff^4 = Omega_i^2 Omega_j^2
/// reduces exactly to the uniform case). Throws ConfigError on coincident
/// atoms.
CouplingMatrix coupling_matrix(const AtomCloud& cloud, const BeamProfile& beam,
                               const DressingParams& params,
                               const CouplingOptions& options = {});

/// Pair potential J(r, theta) as a callable, for integration routines.
using PairPotentialFn = std::function<double(double r, double theta)>;

struct MeanFieldChi {
    double quadrature = 0.0;  // rad/us
    double monte_carlo = 0.0; // rad/us
    double integral = 0.0;    // int J d^3r from the quadrature route
    double tail_fraction = 0.0;

    double value() const { return quadrature; }
};

struct ChiIntegrationOptions {
    double r_max = 0.0;            // um; 0 means 8 * r_scale
    double r_scale = 5.0;          // um, sets default cutoff
    std::size_t mc_samples = 100000;
    std::uint64_t mc_seed = 12345;
    double max_tail_fraction = 0.10;
    bool angular = false; // integrate over theta as well (needed if f != 1)
};

/// Mean-field twisting prediction chi_th = -(rho/2) * int J(r) d^3r,
/// computed both by radial quadrature and by stratified Monte Carlo over
/// sampled pair separations. Throws IntegrationError when the r^-6 tail
/// estimate indicates a non-convergent or badly truncated integral.
MeanFieldChi meanfield_chi(double density, const PairPotentialFn& potential,
                           const ChiIntegrationOptions& options = {});

/// Convenience overload using the soft-core potential of `params`.
MeanFieldChi meanfield_chi(double density, const DressingParams& params,
                           ChiIntegrationOptions options = {});

/// int_{|r| > r_cut} J d^3r estimated from a local power-law fit of the
/// tail; used by the PeriodicBulk coupling compensation.
double potential_tail_integral(const PairPotentialFn& potential, double r_cut);

/// Number of atoms within an interaction sphere, N_c = rho * (4/3) pi r_c^3.
double interaction_sphere_count(double density, double r_c);

/// Cloud snapshot text records (id, x, y, z, Omega_local).
std::string cloud_to_text(const AtomCloud& cloud, const BeamProfile& beam);
AtomCloud cloud_from_text(const std::string& text);

} // namespace rydsim

#endif // RYDSIM_CLOUD_HPP
