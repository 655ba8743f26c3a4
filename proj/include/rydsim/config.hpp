#ifndef RYDSIM_CONFIG_HPP
#define RYDSIM_CONFIG_HPP

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "rydsim/cloud.hpp"
#include "rydsim/pair_potential.hpp"
#include "rydsim/spin_engine.hpp"

namespace rydsim {

/// Resolved experiment configuration. Config files quote frequencies in
/// MHz (omega = 2 pi nu), lengths in um, times in us; every physical key
/// carries its unit in the name. Unknown keys are rejected.
struct ExperimentConfig {
    DressingParams dressing;

    CloudGeometry cloud_geometry;
    double density = 0.10; // atoms / um^3
    std::size_t atom_count = 200;
    std::uint64_t seed = 7;

    bool beam_enabled = false;
    double beam_waist = 80.0;  // um
    double beam_center = 0.0;  // um

    // Sequence parameters.
    int theta_points = 16;
    std::vector<double> tau_r_list = {5.0, 10.0, 20.0, 30.0, 40.0}; // us
    int alpha_points = 21;
    int cycles = 4;
    double tau_x = 1.0;    // us
    double h_tau_x = 0.12; // rad per cycle

    std::string backend = "meanfield"; // meanfield | exact | collective
    CouplingMode coupling_mode = CouplingMode::PeriodicBulk;
    double chi_calibration = 1.0;
    DecoherenceModel decoherence;
    long shots = 0; // 0 = noiseless readout

    std::size_t exact_atom_count = 10;
    std::size_t exact_atom_limit = 14;

    // Floquet trajectory datasets.
    std::vector<double> lambda_eff_list = {0.0, 1.2, 1.8, 2.7};
    int trajectory_cycles = 4;
    int orbit_probe_cycles = 256;
    int initial_tilt_count = 6;
    int initial_azimuth_count = 4;

    // Bifurcation map datasets.
    int position_bins = 41;
    double position_span = 160.0; // um
    double peak_chi_tau_r = 0.28; // rad per cycle at beam center
    double map_contrast = 1.0;    // C(x), uniform
    int map_theta_points = 81;
    std::vector<double> cut_positions = {0.0, 20.0, 33.0, 60.0}; // um

    std::string out_dir = "out";

    nlohmann::json resolved; // full resolved document, for provenance

    double h() const { return tau_x > 0.0 ? h_tau_x / tau_x : 0.0; }
};

/// Parses and validates a config document; missing keys fall back to the
/// defaults above. Throws ConfigError on unknown keys or invalid values.
ExperimentConfig parse_config(const nlohmann::json& doc);

/// Reads a JSON config file.
ExperimentConfig load_config(const std::string& path);

/// The resolved config of the defaults (also the template emitted by the
/// CLI when asked for one).
nlohmann::json default_config_json();

} // namespace rydsim

#endif // RYDSIM_CONFIG_HPP
