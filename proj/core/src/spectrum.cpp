#include "rydat/spectrum.hpp"

#include <algorithm>
#include <cmath>

namespace rydat {

SignalQuadrature::SignalQuadrature(const BeamGeometry& beam, const CloudModel& cloud,
                                   const QuadratureConfig& cfg) {
    cfg.validate();
    beam.validate();
    cloud.validate();

    const double half_x = std::min(3.0 * beam.w_maj, 4.0 * cloud.s_x);
    const double half_y = std::min(3.0 * beam.w_min, 4.0 * cloud.s_y);
    const double dx = 2.0 * half_x / cfg.nx;
    const double dy = 2.0 * half_y / cfg.ny;

    omega_.reserve(static_cast<std::size_t>(cfg.nx) * cfg.ny);
    ncol_.reserve(omega_.capacity());
    for (int iy = 0; iy < cfg.ny; ++iy) {
        const double y = -half_y + (iy + 0.5) * dy;
        for (int ix = 0; ix < cfg.nx; ++ix) {
            const double x = -half_x + (ix + 0.5) * dx;
            omega_.push_back(rabi_profile(x, y, beam));
            ncol_.push_back(column_density(x, y, cloud));
        }
    }
}

double SignalQuadrature::transmission(double delta, const LadderSystem& sys,
                                      double omega_scale) const {
    double sum = 0.0;
    for (std::size_t i = 0; i < omega_.size(); ++i) {
        const double sigma = probe_cross_section(delta, sys, omega_scale * omega_[i]);
        sum += std::exp(-sigma * ncol_[i]);
    }
    return sum / static_cast<double>(omega_.size());
}

double transmission_signal(double delta, const LadderSystem& sys, const BeamGeometry& beam,
                           const CloudModel& cloud, const QuadratureConfig& quad) {
    return SignalQuadrature(beam, cloud, quad).transmission(delta, sys);
}

SpectrumTrace simulate_spectrum(const std::vector<double>& sweep_grid, const LadderSystem& sys,
                                const BeamGeometry& beam, const CloudModel& cloud,
                                const QuadratureConfig& quad) {
    SpectrumTrace trace;
    trace.detuning = sweep_grid;
    trace.kind = ValueKind::Transmission;
    trace.stage = TraceStage::Ideal;
    trace.validate();

    const SignalQuadrature q(beam, cloud, quad);
    trace.value.reserve(sweep_grid.size());
    for (double d : sweep_grid) trace.value.push_back(q.transmission(d, sys));
    return trace;
}

SpectrumTrace cross_section_trace(const std::vector<double>& sweep_grid,
                                  const LadderSystem& sys, double omega_c) {
    SpectrumTrace trace;
    trace.detuning = sweep_grid;
    trace.kind = ValueKind::CrossSection;
    trace.stage = TraceStage::Ideal;
    trace.validate();
    trace.value.reserve(sweep_grid.size());
    for (double d : sweep_grid) trace.value.push_back(probe_cross_section(d, sys, omega_c));
    return trace;
}

std::vector<double> make_sweep_grid(double center, double half_span, int points) {
    if (points < 2) throw ConfigError("sweep grid needs at least 2 points");
    if (!(half_span > 0)) throw ConfigError("sweep half-span must be positive");
    std::vector<double> grid(points);
    const double step = 2.0 * half_span / (points - 1);
    for (int i = 0; i < points; ++i) grid[i] = center - half_span + i * step;
    return grid;
}

TransmissionImage transverse_transmission_map(double delta, const LadderSystem& sys,
                                              const BeamGeometry& beam, const CloudModel& cloud,
                                              int nx, int ny, double half_width_x,
                                              double half_width_y) {
    if (nx < 2 || ny < 2) throw ConfigError("image grid needs at least 2x2 pixels");
    beam.validate();
    cloud.validate();

    TransmissionImage img;
    img.nx = nx;
    img.ny = ny;
    img.dx = 2.0 * half_width_x / (nx - 1);
    img.dy = 2.0 * half_width_y / (ny - 1);
    img.values.resize(static_cast<std::size_t>(nx) * ny);
    for (int iy = 0; iy < ny; ++iy) {
        for (int ix = 0; ix < nx; ++ix) {
            const double x = img.x_of(ix);
            const double y = img.y_of(iy);
            const double sigma = probe_cross_section(delta, sys, rabi_profile(x, y, beam));
            img.values[static_cast<std::size_t>(iy) * nx + ix] =
                std::exp(-sigma * column_density(x, y, cloud));
        }
    }
    return img;
}

} // namespace rydat
