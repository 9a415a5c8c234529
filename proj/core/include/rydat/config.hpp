#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "rydat/instrument.hpp"
#include "rydat/lineshape.hpp"
#include "rydat/spectrum.hpp"
#include "rydat/states.hpp"

namespace rydat {

/// Flat key-value run configuration with dotted section prefixes. Every
/// physical quantity carries its unit in the key suffix; unknown keys are
/// rejected at load time. See data/paper.cfg for the canonical example.
struct RunConfig {
    // species
    std::string species_path;

    // ladder.*
    LadderSystem ladder;        // gamma, sigma0, i_sat filled; gamma3/delta_c zero
    double gamma3_floor = 0.0;  // rad/s, instrumental floor used to seed fits

    // beam.*
    double beam_w_maj = 0.0;  // m
    double beam_w_min = 0.0;  // m

    // cloud.*
    CloudModel cloud;

    // instrument.*
    InstrumentModel instrument;

    // sweep.*
    double sweep_center = 0.0;     // rad/s
    double sweep_half_span = 0.0;  // rad/s
    int sweep_points = 0;

    // quadrature.*
    QuadratureConfig quadrature;

    // fit.*
    std::string fit_mode = "forward";  // "forward" | "effective"
    double gamma_effective = 0.0;      // rad/s; 0 = derive from a two-level run

    // transition.*
    RydbergState lower_state;  // carries F, m_F
    int upper_l = 2;
    HalfInteger upper_j;
    HalfInteger upper_F, upper_mF;
    int polarization_q = +1;

    // sim.* (single-spectrum simulation)
    std::optional<double> sim_omega_max;  // rad/s
    std::optional<int> sim_n;             // derive Ω from NCA dipole + beam power
    double sim_power = 0.0;               // W
    double sim_gamma3 = 0.0;              // rad/s
    double sim_delta = 0.0;               // rad/s
    double sim_noise_rel = 0.0;
    bool sim_instrumented = true;

    // pipeline.*
    std::vector<int> n_list;
    std::vector<double> powers;  // W
    double noise_rel = 0.0;
    std::uint64_t seed = 0;
    double true_gamma3 = 0.0;  // rad/s used when generating synthetic spectra
    double analysis_w_maj_offset = 0.0;  // m, analysis-side waist perturbations
    double analysis_w_min_offset = 0.0;  // m
    double analysis_power_scale = 1.0;
    double waist_err = 0.0;      // m, quoted waist uncertainty
    double power_rel_err = 0.0;  // quoted relative power-calibration error
    std::vector<std::string> model_table_paths;
    std::string spectra_dir;  // load recorded spectra instead of simulating

    std::string canonical_text;  // parsed key-value content, for hashing
    std::string base_dir;        // directory of the config file

    static RunConfig load(const std::string& path);

    /// Upper state for a given principal quantum number, with hyperfine numbers.
    RydbergState upper_state(int n) const;
    std::vector<double> sweep_grid() const;
};

/// Raw key-value file: '#' comments, 'key = value', duplicate keys rejected.
std::map<std::string, std::string> parse_key_value_file(const std::string& path,
                                                        std::string* canonical_text = nullptr);

} // namespace rydat
