#pragma once

#include "rydat/constants.hpp"

// Unit conversions for I/O boundaries. Internally all widths, detunings and
// Rabi frequencies are angular frequencies in rad/s; lengths are SI metres;
// atomic-structure quantities are atomic units. File formats and CLI flags
// speak ordinary frequency (MHz, kHz), mW and um, converted exactly here.

namespace rydat::units {

inline constexpr double two_pi = 2.0 * constants::pi;

inline constexpr double mhz_to_rads(double mhz) { return two_pi * 1.0e6 * mhz; }
inline constexpr double rads_to_mhz(double w) { return w / (two_pi * 1.0e6); }
inline constexpr double khz_to_rads(double khz) { return two_pi * 1.0e3 * khz; }
inline constexpr double hz_to_rads(double hz) { return two_pi * hz; }

inline constexpr double mw_to_w(double mw) { return 1.0e-3 * mw; }
inline constexpr double um_to_m(double um) { return 1.0e-6 * um; }
inline constexpr double m_to_um(double m) { return 1.0e6 * m; }
inline constexpr double mm_to_m(double mm) { return 1.0e-3 * mm; }

// Number densities: experimental papers quote cm^-3, internals are m^-3.
inline constexpr double percm3_to_perm3(double n) { return 1.0e6 * n; }

// Dipole moments.
inline constexpr double au_to_cm(double d_au) { return d_au * constants::dipole_au; }
inline constexpr double cm_to_au(double d_cm) { return d_cm / constants::dipole_au; }

} // namespace rydat::units
