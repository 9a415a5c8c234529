#pragma once

// Physical constants, CODATA 2018. This is the only place numeric values of
// fundamental constants appear; everything else converts through here.

namespace rydat::constants {

inline constexpr double hbar = 1.054571817e-34;          // J s
inline constexpr double speed_of_light = 299792458.0;    // m/s (exact)
inline constexpr double epsilon0 = 8.8541878128e-12;     // F/m
inline constexpr double elementary_charge = 1.602176634e-19;  // C (exact)
inline constexpr double bohr_radius = 5.29177210903e-11; // m
inline constexpr double hartree = 4.3597447222071e-18;   // J
inline constexpr double electron_mass = 9.1093837015e-31; // kg

// 1 atomic unit of electric dipole moment, in C m.
inline constexpr double dipole_au = elementary_charge * bohr_radius;

inline constexpr double pi = 3.14159265358979323846;

} // namespace rydat::constants
