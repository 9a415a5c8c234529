#pragma once

#include "rydat/errors.hpp"

namespace rydat {

/// Parameters of the three-level ladder probe-absorption model. All rates
/// and detunings are angular frequencies (rad/s).
struct LadderSystem {
    double gamma = 0.0;     // Γ, decay width of the intermediate state
    double gamma3 = 0.0;    // γ₃, dephasing of the upper state
    double sigma0 = 0.0;    // resonant two-level cross-section, m²
    double delta_c = 0.0;   // Δ, coupling-beam detuning
    double i_sat = 0.0;     // probe saturation intensity, W/m² (weak-probe bookkeeping)

    void validate() const {
        if (!(gamma > 0)) throw ConfigError("ladder system needs Γ > 0");
        if (gamma3 < 0) throw ConfigError("ladder system needs γ₃ >= 0");
        if (!(sigma0 > 0)) throw ConfigError("ladder system needs σ₀ > 0");
    }
};

/// Probe absorption cross-section σ_P(δ) of the driven ladder system, m².
/// Real, in [0, σ₀]. For γ₃ = 0, δ = -Δ and Ω_C = 0 the coupling term is a
/// removable singularity and the two-level value is returned.
double probe_cross_section(double delta, const LadderSystem& sys, double omega_c);

/// Elliptical Gaussian coupling beam. Waists are 1/e² intensity radii, so the
/// field falls as exp(-x²/w²) and the Rabi frequency follows the field.
struct BeamGeometry {
    double w_maj = 0.0;     // m
    double w_min = 0.0;     // m
    double power = 0.0;     // W
    double omega_max = 0.0; // peak Rabi frequency, rad/s (derived from power)

    void validate() const {
        if (!(w_maj > 0) || !(w_min > 0)) throw ConfigError("beam waists must be positive");
        if (power < 0) throw ConfigError("beam power must be non-negative");
        if (omega_max < 0) throw ConfigError("peak Rabi frequency must be non-negative");
    }
};

/// Peak Rabi frequency of a Gaussian beam of total power P driving a dipole
/// μ: Ω_max = (2μ/ħ) sqrt(P / (π w_maj w_min c ε₀)). Inputs SI (W, m, C·m).
double rabi_max_from_power(double power, double w_maj, double w_min, double mu_cm);

/// Convenience: beam with omega_max derived from power and dipole moment.
BeamGeometry make_beam(double power, double w_maj, double w_min, double mu_cm);

/// Ω(x, y) = Ω_max exp(-x²/w_maj² - y²/w_min²); intensity falls as the square.
double rabi_profile(double x, double y, const BeamGeometry& beam);

/// Gaussian atom cloud with rms radii s_x, s_y, s_z.
struct CloudModel {
    double n0 = 0.0;   // peak density, m⁻³
    double s_x = 0.0;  // m
    double s_y = 0.0;  // m
    double s_z = 0.0;  // m
    double atom_number = 0.0;  // consistency field

    /// Checks n₀ (2π)^(3/2) s_x s_y s_z = N within 1%.
    void validate() const;
};

/// Column density ∫ n dz = n₀ sqrt(2π) s_z exp(-x²/2s_x² - y²/2s_y²), m⁻².
double column_density(double x, double y, const CloudModel& cloud);

} // namespace rydat
