#pragma once

#include <string>
#include <vector>

#include "rydat/lineshape.hpp"

namespace rydat {

enum class ValueKind { Transmission, CrossSection };
enum class TraceStage { Ideal, Instrumented };

/// One recorded or simulated spectrum: values sampled on a strictly
/// increasing probe-detuning grid (rad/s).
struct SpectrumTrace {
    std::vector<double> detuning;
    std::vector<double> value;
    ValueKind kind = ValueKind::Transmission;
    TraceStage stage = TraceStage::Ideal;

    void validate() const {
        if (detuning.size() != value.size())
            throw ConfigError("trace detuning and value lengths differ");
        for (std::size_t i = 0; i + 1 < detuning.size(); ++i)
            if (!(detuning[i] < detuning[i + 1]))
                throw ConfigError("trace detunings must be strictly increasing");
    }
};

/// Transverse quadrature resolution for the cloud/beam signal integral.
struct QuadratureConfig {
    int nx = 48;
    int ny = 48;

    void validate() const {
        if (nx <= 0 || ny <= 0)
            throw ConfigError("quadrature grid resolution must be positive");
    }
};

/// Precomputed per-cell Rabi frequency and column density for the transverse
/// quadrature; independent of probe detuning, so fits reuse it across a whole
/// trace. Midpoint rule on a uniform grid covering the beam/cloud overlap
/// (half-extent per axis: min(3 waist, 4 rms radius)).
class SignalQuadrature {
public:
    SignalQuadrature(const BeamGeometry& beam, const CloudModel& cloud,
                     const QuadratureConfig& cfg);

    /// Area-normalised transmitted fraction S/I₀ at one probe detuning.
    /// omega_scale multiplies the stored Rabi profile, so a fit can sweep the
    /// peak Rabi frequency without rebuilding the quadrature.
    double transmission(double delta, const LadderSystem& sys, double omega_scale = 1.0) const;

private:
    std::vector<double> omega_;
    std::vector<double> ncol_;
};

/// Normalised transmitted fraction over the imaged region at one detuning;
/// the local cross-section σ_P(δ; Ω(x,y)) attenuates the local column density
/// pointwise (Beer's law per cell). Equals 1 exactly when σ₀ = 0.
double transmission_signal(double delta, const LadderSystem& sys, const BeamGeometry& beam,
                           const CloudModel& cloud, const QuadratureConfig& quad);

/// trace of transmission_signal over a sweep grid; tagged Ideal.
SpectrumTrace simulate_spectrum(const std::vector<double>& sweep_grid, const LadderSystem& sys,
                                const BeamGeometry& beam, const CloudModel& cloud,
                                const QuadratureConfig& quad);

/// σ_P(δ) itself at spatially uniform coupling (kind CrossSection); the
/// two-level case is omega_c = 0.
SpectrumTrace cross_section_trace(const std::vector<double>& sweep_grid,
                                  const LadderSystem& sys, double omega_c);

/// Uniformly spaced detuning grid covering [center - half_span, center + half_span].
std::vector<double> make_sweep_grid(double center, double half_span, int points);

/// Transverse transmission map at fixed probe detuning (an absorption image).
/// Pixel (ix, iy) sits at x = (ix - (nx-1)/2) dx, y likewise; values in [0, 1].
struct TransmissionImage {
    int nx = 0, ny = 0;
    double dx = 0.0, dy = 0.0;  // pixel scale, m
    std::vector<double> values; // row-major, iy * nx + ix

    double x_of(int ix) const { return (ix - 0.5 * (nx - 1)) * dx; }
    double y_of(int iy) const { return (iy - 0.5 * (ny - 1)) * dy; }
    double at(int ix, int iy) const { return values[static_cast<std::size_t>(iy) * nx + ix]; }
};

TransmissionImage transverse_transmission_map(double delta, const LadderSystem& sys,
                                              const BeamGeometry& beam, const CloudModel& cloud,
                                              int nx, int ny, double half_width_x,
                                              double half_width_y);

} // namespace rydat
