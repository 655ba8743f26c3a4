#ifndef RYDSIM_SEQUENCE_HPP
#define RYDSIM_SEQUENCE_HPP

#include <string>
#include <vector>

#include "rydsim/errors.hpp"

namespace rydsim {

/// One pulse event. Microwave rotations are instantaneous; axes lie in
/// the equatorial plane and are given by their azimuth.
struct PulseEvent {
    enum class Kind { Dress, Rotate, Readout };
    Kind kind = Kind::Dress;

    double duration = 0.0;     // Dress: us
    double axis_azimuth = 0.0; // Rotate: rad
    double angle = 0.0;        // Rotate: rad (signed)
    double readout_phase = 0.0; // Readout: fringe phase alpha, rad

    bool is_pi_pulse = false; // echo pulse, counted for frame parity

    static PulseEvent dress(double tau) {
        PulseEvent e;
        e.kind = Kind::Dress;
        e.duration = tau;
        return e;
    }
    static PulseEvent rotate(double axis_azimuth, double angle, bool is_pi = false) {
        PulseEvent e;
        e.kind = Kind::Rotate;
        e.axis_azimuth = axis_azimuth;
        e.angle = angle;
        e.is_pi_pulse = is_pi;
        return e;
    }
    static PulseEvent readout(double alpha = 0.0) {
        PulseEvent e;
        e.kind = Kind::Readout;
        e.readout_phase = alpha;
        return e;
    }
};

/// Ordered pulse events plus protocol metadata.
///
/// Echo bookkeeping: each pi pulse flips the frame in which interaction
/// phases accumulate. `pi_parity()` is the number of pi pulses mod 2; the
/// readout convention references fringe phases to the echo toggling
/// frame, so analysis applies an R_x(pi) correction when the parity is
/// odd. This is what makes the spin-echo fit land on phi = -Q cos(theta)
/// with Q = chi * tau_R > 0 for ferromagnetic couplings.
struct PulseSequence {
    std::vector<PulseEvent> events;

    // Protocol metadata.
    double theta = 0.0;  // initial tilt
    double phi0 = 0.0;   // initial azimuth
    int cycles = 0;      // k (0 for plain Ramsey/echo)
    double tau_r = 0.0;  // dressing time per cycle (or total for echo), us
    double tau_x = 0.0;  // microwave pulse duration per cycle, us
    double h = 0.0;      // transverse field strength, rad/us

    double total_dressing_time() const;
    int pi_parity() const;
    int readout_count() const;

    void validate() const;
};

/// Spin-echo Ramsey sequence (interaction-phase measurement):
/// prepare |theta>, dress tau_R/2, pi pulse about x, dress tau_R/2,
/// readout with fringe phase alpha.
PulseSequence build_spin_echo_sequence(double theta, double tau_r, double alpha = 0.0);

/// k-cycle Floquet emulation of the transverse-field Ising model.
///
/// The first dressing block is split in half and the second half placed
/// after the last microwave rotation, which keeps the stroboscopic fixed
/// points on the phi = 0 meridian:
///
///   prep | D(tau_R/2) | [pi, X(-h tau_X), D(tau_R)] x (k-1)
///        | pi, X(-h tau_X), D(tau_R/2) | readout
///
/// One echo pi pulse rides along with each microwave rotation (they
/// commute, both are about x); with that placement the s_z-linear terms
/// cancel over the train for every k. echo_period > 1 inserts the pi
/// only every echo_period cycles (linear terms then cancel only over
/// parity-complete groups).
PulseSequence build_floquet_sequence(double theta, double phi0, int cycles, double tau_r,
                                     double tau_x, double h, double alpha = 0.0,
                                     int echo_period = 1);

} // namespace rydsim

#endif // RYDSIM_SEQUENCE_HPP
