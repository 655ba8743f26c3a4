#include "rydsim/spin_engine.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "rydsim/errors.hpp"

namespace rydsim {

void DecoherenceModel::validate() const {
    if (contrast_rate < 0.0 || loss_rate < 0.0)
        throw ConfigError("decoherence rates must be >= 0");
}

SpinObservables observables_from_mean(const Vec3& mean_spin) {
    SpinObservables obs;
    obs.mean_spin = mean_spin;
    obs.contrast = mean_spin.norm();
    obs.transverse_contrast = std::hypot(mean_spin.x, mean_spin.y);
    obs.phase = (obs.transverse_contrast > 0.0)
                    ? std::atan2(mean_spin.y, mean_spin.x)
                    : 0.0;
    return obs;
}

namespace {

Vec3 toggle_frame(const Vec3& s, int parity) {
    return parity % 2 == 0 ? s : Vec3{s.x, -s.y, -s.z};
}

} // namespace

// ---------------------------------------------------------------------
// Mean-field backend
// ---------------------------------------------------------------------

namespace {

Vec3 bloch_derivative(const Vec3& s, double field_z, double contrast_rate) {
    // ds/dt = B z_hat x s - gamma_c * s_perp
    return {-field_z * s.y - contrast_rate * s.x,
            field_z * s.x - contrast_rate * s.y,
            0.0};
}

void rk4_dress(Vec3& s, double field_z, double contrast_rate, double tau,
               const MeanFieldOptions& opt) {
    const double rate = std::max(std::abs(field_z), contrast_rate);
    int n = opt.min_substeps;
    if (rate > 0.0)
        n = std::max<int>(n, static_cast<int>(std::ceil(tau * rate / opt.max_step_angle)));
    const double h = tau / n;
    for (int step = 0; step < n; ++step) {
        const Vec3 k1 = bloch_derivative(s, field_z, contrast_rate);
        const Vec3 k2 = bloch_derivative(s + k1 * (0.5 * h), field_z, contrast_rate);
        const Vec3 k3 = bloch_derivative(s + k2 * (0.5 * h), field_z, contrast_rate);
        const Vec3 k4 = bloch_derivative(s + k3 * h, field_z, contrast_rate);
        s += (k1 + 2.0 * k2 + 2.0 * k3 + k4) * (h / 6.0);
    }
    if (!std::isfinite(s.x) || !std::isfinite(s.y) || !std::isfinite(s.z))
        throw NumericalError("evolve_meanfield: integrator produced non-finite state "
                             "(field " + std::to_string(field_z) + " rad/us, step " +
                             std::to_string(h) + " us)");
}

Vec3 mean_of(const std::vector<Vec3>& spins) {
    Vec3 m{0.0, 0.0, 0.0};
    for (const Vec3& s : spins) m += s;
    const double n = static_cast<double>(spins.size());
    return {m.x / n, m.y / n, m.z / n};
}

} // namespace

MeanFieldResult evolve_meanfield(const CouplingMatrix& couplings,
                                 const PulseSequence& sequence,
                                 const DecoherenceModel& decoherence,
                                 const MeanFieldOptions& options) {
    sequence.validate();
    decoherence.validate();
    const std::size_t n = couplings.n;
    if (n == 0) throw ConfigError("evolve_meanfield: empty coupling matrix");

    MeanFieldResult result;
    result.state.spins.assign(n, Vec3{0.0, 0.0, 1.0});
    result.state.survival = 1.0;

    double time = 0.0, dress_time = 0.0;
    int parity = 0;
    int event_index = 0;

    auto record = [&]() {
        TrajectoryPoint p;
        p.event_index = event_index;
        p.time = time;
        p.mean_spin = mean_of(result.state.spins);
        p.mean_spin_toggled = toggle_frame(p.mean_spin, parity);
        p.contrast = p.mean_spin.norm();
        p.transverse_contrast = std::hypot(p.mean_spin.x, p.mean_spin.y);
        p.survival = result.state.survival;
        p.pi_parity = parity;
        result.trajectory.push_back(p);
    };
    record();

    std::vector<double> field(n);
    for (const PulseEvent& ev : sequence.events) {
        ++event_index;
        switch (ev.kind) {
        case PulseEvent::Kind::Dress: {
            // The field depends only on the partners' z components, which
            // dressing (precession about z, transverse decay) preserves,
            // so it is evaluated once per event.
            for (std::size_t i = 0; i < n; ++i) {
                double b = couplings.light_shift[i];
                for (std::size_t k = 0; k < n; ++k)
                    b += couplings.at(i, k) * 0.5 * (result.state.spins[k].z + 1.0);
                field[i] = b;
            }
            for (std::size_t i = 0; i < n; ++i)
                rk4_dress(result.state.spins[i], field[i], decoherence.contrast_rate,
                          ev.duration, options);
            result.state.survival *= std::exp(-decoherence.loss_rate * ev.duration);
            time += ev.duration;
            dress_time += ev.duration;
            break;
        }
        case PulseEvent::Kind::Rotate: {
            for (Vec3& s : result.state.spins)
                s = rotate_equatorial(s, ev.axis_azimuth, ev.angle);
            if (ev.is_pi_pulse) ++parity;
            break;
        }
        case PulseEvent::Kind::Readout:
            break;
        }
        record();
    }

    const Vec3 mean = toggle_frame(mean_of(result.state.spins), parity);
    result.readout.collective = observables_from_mean(mean);
    result.readout.survival = result.state.survival;
    result.readout.total_dressing_time = dress_time;
    result.readout.pi_parity = parity;
    return result;
}

// ---------------------------------------------------------------------
// Exact backend
// ---------------------------------------------------------------------

double StateVector::norm() const {
    double s = 0.0;
    for (const auto& a : amplitudes) s += std::norm(a);
    return std::sqrt(s);
}

namespace {

using cd = std::complex<double>;

void apply_uniform_rotation(StateVector& psi, double axis_azimuth, double angle) {
    const double c = std::cos(0.5 * angle);
    const double s = std::sin(0.5 * angle);
    // exp(-i (angle/2) n.sigma), n = (cos a, sin a, 0), basis (down, up).
    const cd u01 = cd(0.0, -s) * std::polar(1.0, axis_azimuth);  // down <- up
    const cd u10 = cd(0.0, -s) * std::polar(1.0, -axis_azimuth); // up <- down
    for (std::size_t i = 0; i < psi.n_spins; ++i) {
        const std::size_t bit = std::size_t{1} << i;
        for (std::size_t b = 0; b < psi.amplitudes.size(); ++b) {
            if (b & bit) continue;
            const cd a0 = psi.amplitudes[b];       // spin i down
            const cd a1 = psi.amplitudes[b | bit]; // spin i up
            psi.amplitudes[b] = c * a0 + u01 * a1;
            psi.amplitudes[b | bit] = u10 * a0 + c * a1;
        }
    }
}

std::vector<double> basis_energies(const CouplingMatrix& couplings,
                                   HamiltonianTerms terms) {
    const std::size_t n = couplings.n;
    const std::size_t dim = std::size_t{1} << n;
    std::vector<double> energy(dim, 0.0);
    for (std::size_t b = 0; b < dim; ++b) {
        double e = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double ni = (b >> i) & 1 ? 1.0 : 0.0;
            if (terms == HamiltonianTerms::Full) e += couplings.light_shift[i] * ni;
            for (std::size_t k = i + 1; k < n; ++k) {
                const double nk = (b >> k) & 1 ? 1.0 : 0.0;
                if (terms == HamiltonianTerms::Full)
                    e += couplings.at(i, k) * ni * nk;
                else
                    e += couplings.at(i, k) * (ni - 0.5) * (nk - 0.5);
            }
        }
        energy[b] = e;
    }
    return energy;
}

cd spin_coherence(const StateVector& psi, std::size_t i) {
    // <sigma_i^+> with sigma^+ = |up><down|
    const std::size_t bit = std::size_t{1} << i;
    cd s = 0.0;
    for (std::size_t b = 0; b < psi.amplitudes.size(); ++b) {
        if (b & bit) continue;
        s += std::conj(psi.amplitudes[b | bit]) * psi.amplitudes[b];
    }
    return s;
}

double spin_z(const StateVector& psi, std::size_t i) {
    const std::size_t bit = std::size_t{1} << i;
    double s = 0.0;
    for (std::size_t b = 0; b < psi.amplitudes.size(); ++b)
        s += std::norm(psi.amplitudes[b]) * ((b & bit) ? 1.0 : -1.0);
    return s;
}

Vec3 exact_mean_spin(const StateVector& psi) {
    Vec3 m{0.0, 0.0, 0.0};
    for (std::size_t i = 0; i < psi.n_spins; ++i) {
        const cd p = spin_coherence(psi, i);
        m.x += 2.0 * p.real();
        m.y += 2.0 * p.imag();
        m.z += spin_z(psi, i);
    }
    const double n = static_cast<double>(psi.n_spins);
    return {m.x / n, m.y / n, m.z / n};
}

} // namespace

ExactResult evolve_exact(const CouplingMatrix& couplings, const PulseSequence& sequence,
                         const DecoherenceModel& decoherence, const ExactOptions& options) {
    sequence.validate();
    decoherence.validate();
    const std::size_t n = couplings.n;
    if (n == 0) throw ConfigError("evolve_exact: empty coupling matrix");
    if (n > options.max_atoms)
        throw ConfigError("evolve_exact: N = " + std::to_string(n) +
                          " exceeds the state-vector limit " +
                          std::to_string(options.max_atoms));

    const std::vector<double> energy = basis_energies(couplings, options.terms);

    ExactResult result;
    result.state.n_spins = n;
    result.state.amplitudes.assign(std::size_t{1} << n, cd(0.0, 0.0));
    result.state.amplitudes.back() = cd(1.0, 0.0); // all spins up

    double time = 0.0, dress_time = 0.0;
    int parity = 0;
    int event_index = 0;

    auto record = [&]() {
        TrajectoryPoint p;
        p.event_index = event_index;
        p.time = time;
        p.mean_spin = exact_mean_spin(result.state);
        p.mean_spin_toggled = toggle_frame(p.mean_spin, parity);
        p.contrast = p.mean_spin.norm();
        p.transverse_contrast = std::hypot(p.mean_spin.x, p.mean_spin.y);
        p.survival = std::exp(-decoherence.loss_rate * dress_time);
        p.pi_parity = parity;
        result.trajectory.push_back(p);
    };
    record();

    for (const PulseEvent& ev : sequence.events) {
        ++event_index;
        switch (ev.kind) {
        case PulseEvent::Kind::Dress: {
            for (std::size_t b = 0; b < result.state.amplitudes.size(); ++b)
                result.state.amplitudes[b] *= std::polar(1.0, -energy[b] * ev.duration);
            time += ev.duration;
            dress_time += ev.duration;
            break;
        }
        case PulseEvent::Kind::Rotate:
            apply_uniform_rotation(result.state, ev.axis_azimuth, ev.angle);
            if (ev.is_pi_pulse) ++parity;
            break;
        case PulseEvent::Kind::Readout:
            break;
        }
        record();
    }

    const double drift = std::abs(result.state.norm() - 1.0);
    if (drift > 1e-12)
        throw NumericalError("evolve_exact: state norm drifted by " + std::to_string(drift));

    // Phenomenological contrast decay, applied to coherences at readout.
    const double contrast_factor = std::exp(-decoherence.contrast_rate * dress_time);

    Vec3 mean = exact_mean_spin(result.state);
    mean.x *= contrast_factor;
    mean.y *= contrast_factor;
    mean = toggle_frame(mean, parity);
    result.readout.collective = observables_from_mean(mean);
    result.readout.survival = std::exp(-decoherence.loss_rate * dress_time);
    result.readout.total_dressing_time = dress_time;
    result.readout.pi_parity = parity;
    result.readout.spin_coherence.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        cd p = spin_coherence(result.state, i) * contrast_factor;
        if (parity % 2 != 0) p = std::conj(p); // R_x(pi) frame correction
        result.readout.spin_coherence[i] = p;
    }
    return result;
}

// ---------------------------------------------------------------------
// Collective backend
// ---------------------------------------------------------------------

Vec3 collective_cycle_map(const CollectiveParams& params, const Vec3& s) {
    const double twist = -params.contrast * params.chi_tau_r;
    Vec3 v = rotate_z(s, 0.5 * twist * s.z);
    v = rotate_equatorial(v, 0.0, -params.h_tau_x);
    v = rotate_z(v, 0.5 * twist * v.z);
    return v;
}

std::vector<Vec3> evolve_collective(const CollectiveParams& params, const Vec3& s0,
                                    int cycles) {
    if (cycles < 0) throw ConfigError("evolve_collective: cycles must be >= 0");
    std::vector<Vec3> traj;
    traj.reserve(cycles + 1);
    Vec3 s = s0.normalized();
    traj.push_back(s);
    for (int c = 0; c < cycles; ++c) {
        s = collective_cycle_map(params, s);
        traj.push_back(s);
    }
    return traj;
}

std::vector<Vec3> collective_flow_line(const CollectiveParams& params, const Vec3& s0,
                                       double cycle_span, int steps) {
    if (steps < 1) throw ConfigError("collective_flow_line: steps must be >= 1");
    auto deriv = [&params](const Vec3& s) {
        const Vec3 w{-params.h_tau_x, 0.0, -params.contrast * params.chi_tau_r * s.z};
        return w.cross(s);
    };
    std::vector<Vec3> line;
    line.reserve(steps + 1);
    Vec3 s = s0.normalized();
    line.push_back(s);
    const double h = cycle_span / steps;
    for (int i = 0; i < steps; ++i) {
        const Vec3 k1 = deriv(s);
        const Vec3 k2 = deriv(s + k1 * (0.5 * h));
        const Vec3 k3 = deriv(s + k2 * (0.5 * h));
        const Vec3 k4 = deriv(s + k3 * h);
        s += (k1 + 2.0 * k2 + 2.0 * k3 + k4) * (h / 6.0);
        s = s.normalized();
        line.push_back(s);
    }
    return line;
}

// ---------------------------------------------------------------------
// Fringe readout
// ---------------------------------------------------------------------

FringeSamples simulate_fringe(const SpinObservables& readout,
                              const std::vector<double>& alphas,
                              std::optional<long> shots, std::uint64_t seed) {
    if (alphas.empty()) throw ConfigError("simulate_fringe: empty alpha grid");
    if (shots.has_value() && *shots <= 0)
        throw ConfigError("simulate_fringe: shots must be > 0 in shot mode");

    FringeSamples out;
    out.alpha = alphas;
    out.p_up.reserve(alphas.size());

    std::mt19937_64 rng(seed);
    for (double a : alphas) {
        const double p =
            0.5 * (1.0 + readout.transverse_contrast * std::cos(a - readout.phase));
        if (!shots) {
            out.p_up.push_back(p);
        } else {
            std::binomial_distribution<long> bin(*shots, std::clamp(p, 0.0, 1.0));
            const long k = bin(rng);
            out.counts_up.push_back(k);
            out.p_up.push_back(static_cast<double>(k) / static_cast<double>(*shots));
        }
    }
    out.shots_per_point = shots.value_or(0);
    return out;
}

} // namespace rydsim
