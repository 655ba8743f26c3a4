#include "rydsim/sequence.hpp"

#include <cmath>
#include <numbers>

namespace rydsim {

double PulseSequence::total_dressing_time() const {
    double t = 0.0;
    for (const auto& e : events)
        if (e.kind == PulseEvent::Kind::Dress) t += e.duration;
    return t;
}

int PulseSequence::pi_parity() const {
    int n = 0;
    for (const auto& e : events)
        if (e.is_pi_pulse) ++n;
    return n % 2;
}

int PulseSequence::readout_count() const {
    int n = 0;
    for (const auto& e : events)
        if (e.kind == PulseEvent::Kind::Readout) ++n;
    return n;
}

void PulseSequence::validate() const {
    for (const auto& e : events) {
        if (e.kind == PulseEvent::Kind::Dress && e.duration < 0.0)
            throw ConfigError("sequence: negative dressing duration");
    }
    const int readouts = readout_count();
    if (readouts > 1) throw ConfigError("sequence: more than one readout");
    if (readouts == 1 && events.back().kind != PulseEvent::Kind::Readout)
        throw ConfigError("sequence: readout must be the final event");
}

namespace {
constexpr double half_pi = std::numbers::pi / 2.0;
}

PulseSequence build_spin_echo_sequence(double theta, double tau_r, double alpha) {
    if (theta < 0.0 || theta > std::numbers::pi)
        throw ConfigError("spin echo: theta must lie in [0, pi]");
    if (tau_r < 0.0) throw ConfigError("spin echo: tau_R must be >= 0");

    PulseSequence seq;
    seq.theta = theta;
    seq.tau_r = tau_r;
    seq.events.push_back(PulseEvent::rotate(half_pi, theta)); // prepare |theta>
    seq.events.push_back(PulseEvent::dress(0.5 * tau_r));
    seq.events.push_back(PulseEvent::rotate(0.0, std::numbers::pi, /*is_pi=*/true));
    seq.events.push_back(PulseEvent::dress(0.5 * tau_r));
    seq.events.push_back(PulseEvent::readout(alpha));
    seq.validate();
    return seq;
}

PulseSequence build_floquet_sequence(double theta, double phi0, int cycles, double tau_r,
                                     double tau_x, double h, double alpha, int echo_period) {
    if (cycles < 1) throw ConfigError("floquet sequence: k must be >= 1");
    if (tau_r < 0.0 || tau_x < 0.0)
        throw ConfigError("floquet sequence: durations must be >= 0");
    const double h_tau_x = h * tau_x;
    if (h_tau_x < 0.0 || h_tau_x >= half_pi)
        throw ConfigError("floquet sequence: h*tau_X must lie in [0, pi/2)");
    if (echo_period < 1) throw ConfigError("floquet sequence: echo period must be >= 1");

    PulseSequence seq;
    seq.theta = theta;
    seq.phi0 = phi0;
    seq.cycles = cycles;
    seq.tau_r = tau_r;
    seq.tau_x = tau_x;
    seq.h = h;

    seq.events.push_back(PulseEvent::rotate(phi0 + half_pi, theta)); // prepare |theta, phi0>
    seq.events.push_back(PulseEvent::dress(0.5 * tau_r));
    for (int c = 1; c <= cycles; ++c) {
        if (c % echo_period == 0)
            seq.events.push_back(PulseEvent::rotate(0.0, std::numbers::pi, /*is_pi=*/true));
        // H_X = -h sum_i s_i^x applied for tau_X rotates the Bloch vector
        // about +x by -h*tau_X.
        if (h_tau_x != 0.0) seq.events.push_back(PulseEvent::rotate(0.0, -h_tau_x));
        seq.events.push_back(PulseEvent::dress(c == cycles ? 0.5 * tau_r : tau_r));
    }
    seq.events.push_back(PulseEvent::readout(alpha));
    seq.validate();
    return seq;
}

} // namespace rydsim
