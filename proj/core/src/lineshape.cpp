#include "rydat/lineshape.hpp"

#include <cmath>
#include <complex>

#include "rydat/constants.hpp"

namespace rydat {

double probe_cross_section(double delta, const LadderSystem& sys, double omega_c) {
    sys.validate();
    if (omega_c < 0) throw DomainError("coupling Rabi frequency must be >= 0");

    const std::complex<double> two_level(sys.gamma, 2.0 * delta);
    std::complex<double> denom = two_level;
    const std::complex<double> upper(sys.gamma3, 2.0 * (delta + sys.delta_c));
    if (omega_c > 0.0) {
        if (upper == std::complex<double>(0.0, 0.0))
            throw DomainError("σ_P undefined: γ₃ = 0 at the two-photon resonance with Ω_C > 0");
        denom += omega_c * omega_c / upper;
    }
    // Ω_C = 0 with γ₃ = 0 and δ = -Δ: removable singularity, coupling term dropped.

    // bracket + c.c. = 2 Re(1/denom); the Γ/2 factor normalises the two-level
    // on-resonance value to σ₀ exactly
    const double bracket = 2.0 * std::real(1.0 / denom);
    return 0.5 * sys.sigma0 * sys.gamma * bracket;
}

double rabi_max_from_power(double power, double w_maj, double w_min, double mu_cm) {
    if (power < 0 || mu_cm < 0) throw DomainError("power and dipole moment must be >= 0");
    if (!(w_maj > 0) || !(w_min > 0)) throw DomainError("beam waists must be positive");
    using namespace constants;
    const double denom = pi * w_maj * w_min * speed_of_light * epsilon0;
    return 2.0 * mu_cm / hbar * std::sqrt(power / denom);
}

BeamGeometry make_beam(double power, double w_maj, double w_min, double mu_cm) {
    BeamGeometry b;
    b.power = power;
    b.w_maj = w_maj;
    b.w_min = w_min;
    b.omega_max = rabi_max_from_power(power, w_maj, w_min, mu_cm);
    b.validate();
    return b;
}

double rabi_profile(double x, double y, const BeamGeometry& beam) {
    beam.validate();
    return beam.omega_max *
           std::exp(-x * x / (beam.w_maj * beam.w_maj) - y * y / (beam.w_min * beam.w_min));
}

void CloudModel::validate() const {
    if (!(n0 >= 0)) throw ConfigError("cloud density must be non-negative");
    if (!(s_x > 0) || !(s_y > 0) || !(s_z > 0))
        throw ConfigError("cloud rms radii must be positive");
    if (atom_number > 0) {
        const double implied =
            n0 * std::pow(2.0 * constants::pi, 1.5) * s_x * s_y * s_z;
        if (std::abs(implied - atom_number) > 0.01 * atom_number)
            throw ConfigError("cloud density, radii and atom number inconsistent (" +
                              std::to_string(implied) + " vs " +
                              std::to_string(atom_number) + ")");
    }
}

double column_density(double x, double y, const CloudModel& cloud) {
    cloud.validate();
    const double gauss =
        std::exp(-0.5 * x * x / (cloud.s_x * cloud.s_x) - 0.5 * y * y / (cloud.s_y * cloud.s_y));
    return cloud.n0 * std::sqrt(2.0 * constants::pi) * cloud.s_z * gauss;
}

} // namespace rydat
