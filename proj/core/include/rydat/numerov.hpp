#pragma once

#include <vector>

#include "rydat/species.hpp"
#include "rydat/states.hpp"

namespace rydat {

/// Reduced radial wavefunction P(r) = r R(r) on an ascending grid, atomic
/// units. The grid is uniform in x = sqrt(r): x_i = x_start + i * x_step.
struct RadialWavefunction {
    std::vector<double> r;
    std::vector<double> p;
    int node_count = 0;
    bool normalized = false;
    /// Set for hydrogenic species when node_count != n - l - 1.
    bool node_count_warning = false;
    double x_start = 0.0;
    double x_step = 0.0;
    double energy_au = 0.0;
};

struct NumerovOptions {
    double x_step = 0.01;  // sqrt(r) grid step, a.u.^(1/2)
};

/// Integrate f(r) dr over the wavefunction grid (trapezoid in x with the
/// dr = 2x dx weight). `values` are f at the grid points.
double integrate_dr(const RadialWavefunction& wf, const std::vector<double>& values);

/// Inward Numerov integration of the radial equation at the state energy,
/// from r_out = 2n(n+15) down to r_in = max(alpha_c^(1/3), 0.05).
/// The returned function is normalised (integral of P^2 dr = 1) and its sign
/// fixed so P > 0 near r_out. Throws NumericalError on divergence.
RadialWavefunction numerov_radial(const RydbergState& state, const SpeciesModel& species,
                                  ModelKind model, const NumerovOptions& opts = {});

} // namespace rydat
