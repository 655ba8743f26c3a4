#ifndef RYDSIM_SPIN_ENGINE_HPP
#define RYDSIM_SPIN_ENGINE_HPP

#include <complex>
#include <cstdint>
#include <optional>
#include <vector>

#include "rydsim/cloud.hpp"
#include "rydsim/geometry.hpp"
#include "rydsim/sequence.hpp"

namespace rydsim {

// Conventions, fixed by two anchors (the twisting fit phi = -Q cos(theta)
// with Q = chi*tau_R, and the fixed-point formula S/S = (1/Lambda, 0,
// +-sqrt(1 - 1/Lambda^2))):
//   - Bloch vectors are unit 3-vectors; |theta, phi> has polar angle theta
//     from +z and azimuth phi.
//   - During dressing, spin i precesses about +z at rate
//     B_i = sum_j J_ij (z_j + 1)/2 + delta_i  (z_j the partner's Bloch z).
//   - Readout phases are referenced to the echo toggling frame: when the
//     accumulated pi-pulse parity is odd, an R_x(pi) correction
//     (x, y, z) -> (x, -y, -z) is applied before extracting (C, phi).

/// Phenomenological stand-ins for dissipation during dressing.
struct DecoherenceModel {
    double contrast_rate = 0.0; // 1/us, shrinks transverse coherence
    double loss_rate = 0.0;     // 1/us, atom survival fraction decay

    void validate() const;
};

/// Collective observables of a spin configuration.
struct SpinObservables {
    Vec3 mean_spin;                   // <S>/S
    double contrast = 0.0;            // |<S>|/S
    double transverse_contrast = 0.0; // 2|<S_perp>|/N, the fringe amplitude
    double phase = 0.0;               // azimuth of <S_perp>, rad
};

SpinObservables observables_from_mean(const Vec3& mean_spin);

/// Snapshot at an event boundary. `mean_spin` is the raw lab frame;
/// `mean_spin_toggled` has the pi-parity correction applied.
struct TrajectoryPoint {
    int event_index = -1;
    double time = 0.0; // us
    Vec3 mean_spin;
    Vec3 mean_spin_toggled;
    double contrast = 0.0;
    double transverse_contrast = 0.0;
    double survival = 1.0;
    int pi_parity = 0;
};

/// Final readout, in the toggling frame, with decoherence applied.
struct ReadoutResult {
    SpinObservables collective;
    double survival = 1.0;
    double total_dressing_time = 0.0;
    int pi_parity = 0;
    // Per-spin transverse coherence <sigma_i^+> (exact backend only).
    std::vector<std::complex<double>> spin_coherence;
};

// ---------------------------------------------------------------------
// Per-spin mean-field backend
// ---------------------------------------------------------------------

struct BlochSet {
    std::vector<Vec3> spins;
    double survival = 1.0;
};

struct MeanFieldOptions {
    // Max precession angle per RK4 step; 0.02 keeps the norm drift per
    // event below the 1e-9 budget (RK4 radius error per step ~ (B h)^6).
    double max_step_angle = 0.02;
    int min_substeps = 20;
};

struct MeanFieldResult {
    BlochSet state;
    std::vector<TrajectoryPoint> trajectory;
    ReadoutResult readout;
};

MeanFieldResult evolve_meanfield(const CouplingMatrix& couplings,
                                 const PulseSequence& sequence,
                                 const DecoherenceModel& decoherence = {},
                                 const MeanFieldOptions& options = {});

// ---------------------------------------------------------------------
// Exact state-vector backend
// ---------------------------------------------------------------------

struct StateVector {
    std::size_t n_spins = 0;
    std::vector<std::complex<double>> amplitudes; // 2^n, bit i set = spin i up

    double norm() const;
};

enum class HamiltonianTerms {
    Full,     // sum_{i<j} J_ij n_i n_j + sum_i delta_i n_i (Ising + linear)
    IsingOnly // sum_{i<j} J_ij s_i^z s_j^z
};

struct ExactOptions {
    HamiltonianTerms terms = HamiltonianTerms::Full;
    std::size_t max_atoms = 14;
};

struct ExactResult {
    StateVector state;
    std::vector<TrajectoryPoint> trajectory;
    ReadoutResult readout;
};

/// Evolves the 2^N state vector. Dressing is diagonal in the z basis
/// (per-basis-state phase accumulation); rotations are identical
/// single-spin unitaries. Throws ConfigError when N exceeds the limit.
ExactResult evolve_exact(const CouplingMatrix& couplings, const PulseSequence& sequence,
                         const DecoherenceModel& decoherence = {},
                         const ExactOptions& options = {});

// ---------------------------------------------------------------------
// Collective (single classical spin) backend
// ---------------------------------------------------------------------

/// Per-cycle stroboscopic parameters of the emulated transverse-field
/// Ising model.
struct CollectiveParams {
    double chi_tau_r = 0.0; // interaction twist per cycle, rad
    double h_tau_x = 0.0;   // drive rotation per cycle, rad
    double contrast = 1.0;  // C, scales the effective twist

    double lambda() const { return h_tau_x != 0.0 ? chi_tau_r / h_tau_x : 0.0; }
    double lambda_eff() const { return contrast * lambda(); }
};

/// One Floquet cycle in the toggling frame, symmetric split form
/// (half twist, drive, half twist) so fixed points stay on the y = 0
/// meridian: s -> T(1/2) X T(1/2) s with
///   T(f): rotation about z by -f * C * chi_tau_r * s_z,
///   X:    rotation about x by -h_tau_x.
Vec3 collective_cycle_map(const CollectiveParams& params, const Vec3& s);

/// k-cycle stroboscopic trajectory (k+1 points, including the start).
std::vector<Vec3> evolve_collective(const CollectiveParams& params, const Vec3& s0,
                                    int cycles);

/// Continuous-flow variant: integrates ds/dt = w(s) x s with
/// w = (-h_tau_x, 0, -C chi_tau_r s_z) per unit cycle time. Returns the
/// polyline sampled at `steps` points over `cycle_span` cycles.
std::vector<Vec3> collective_flow_line(const CollectiveParams& params, const Vec3& s0,
                                       double cycle_span, int steps);

// ---------------------------------------------------------------------
// Fringe readout
// ---------------------------------------------------------------------

struct FringeSamples {
    std::vector<double> alpha; // rad
    std::vector<double> p_up;  // population fraction in |up>
    std::vector<long> counts_up; // filled in shot mode
    long shots_per_point = 0;    // 0 in noiseless mode
};

/// Ramsey fringe P_up(alpha) = (1 + C cos(alpha - phi)) / 2 from the
/// transverse contrast and phase of a readout. In shot mode, draws seeded
/// binomial samples of `shots` atoms per alpha point. Throws ConfigError
/// when shots == 0 is passed explicitly.
FringeSamples simulate_fringe(const SpinObservables& readout,
                              const std::vector<double>& alphas,
                              std::optional<long> shots = std::nullopt,
                              std::uint64_t seed = 0);

} // namespace rydsim

#endif // RYDSIM_SPIN_ENGINE_HPP
