#pragma once

#include <cstdint>

#include "rydat/spectrum.hpp"

namespace rydat {

enum class SweepDirection { Up, Down };

/// Detector chain model: the probe laser linewidth smears the spectrum in
/// the detuning domain, then the photodiode amplifier's single-pole low-pass
/// filter acts on the signal in the time domain as the sweep runs.
struct InstrumentModel {
    double sweep_span = 0.0;   // total detuning swept, rad/s
    double sweep_time = 0.0;   // s
    double corner_hz = 0.0;    // low-pass corner frequency, Hz
    double linewidth_hz = 0.0; // combined laser linewidth FWHM, Hz
    SweepDirection direction = SweepDirection::Up;

    void validate() const {
        if (!(sweep_span > 0)) throw ConfigError("instrument sweep span must be positive");
        if (!(sweep_time > 0)) throw ConfigError("instrument sweep time must be positive");
        if (!(corner_hz > 0)) throw ConfigError("instrument corner frequency must be positive");
        if (linewidth_hz < 0) throw ConfigError("laser linewidth must be non-negative");
    }

    double sweep_rate() const { return sweep_span / sweep_time; }  // rad/s per s
};

/// Returns the trace convolved with a Lorentzian of FWHM = linewidth (in the
/// detuning domain) and passed through the first-order low-pass along the
/// sweep direction. Requires an Ideal trace on a uniform grid; the result is
/// tagged Instrumented.
SpectrumTrace apply_instrument(const SpectrumTrace& trace, const InstrumentModel& inst);

/// Multiplicative Gaussian noise, deterministic for a fixed seed.
/// sigma_rel = 0 returns the input bit-for-bit.
SpectrumTrace add_noise(const SpectrumTrace& trace, double sigma_rel, std::uint64_t seed);

} // namespace rydat
