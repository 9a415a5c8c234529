#include "rydat/numerov.hpp"

#include <cmath>
#include <string>

#include "rydat/errors.hpp"

namespace rydat {

namespace {

// sqrt(r) substitution: with P(r) = sqrt(x) phi(x), r = x^2, the radial
// equation P'' = 2 (V_eff - E) P becomes phi'' = G(x) phi with
// G(x) = 8 x^2 (V_eff(x^2) - E) + 3/(4 x^2), which Numerov integrates on a
// uniform x grid at constant phase resolution near the core.
double g_coefficient(double x, double energy, int l, const SpeciesModel& sp, ModelKind model) {
    const double r = x * x;
    const double v = potential(r, l, sp, model);
    return 8.0 * r * (v - energy) + 0.75 / r;
}

} // namespace

double integrate_dr(const RadialWavefunction& wf, const std::vector<double>& values) {
    const std::size_t n = std::min(values.size(), wf.r.size());
    double sum = 0.0;
    for (std::size_t i = 0; i + 1 < n; ++i) {
        const double xi = wf.x_start + i * wf.x_step;
        const double xj = xi + wf.x_step;
        sum += 0.5 * (values[i] * 2.0 * xi + values[i + 1] * 2.0 * xj) * wf.x_step;
    }
    return sum;
}

RadialWavefunction numerov_radial(const RydbergState& state, const SpeciesModel& species,
                                  ModelKind model, const NumerovOptions& opts) {
    if (model == ModelKind::External)
        throw ConfigError("numerov_radial needs NCA or MMP, not an external table");
    if (opts.x_step <= 0) throw ConfigError("Numerov grid step must be positive");

    const double energy = state_energy(state, species);
    const double r_in = std::max(std::cbrt(species.core_polarizability_au()), 0.05);
    const double r_out = 2.0 * state.n * (state.n + 15.0);
    const double h = opts.x_step;
    const double x_in = std::sqrt(r_in);
    const double x_out = std::sqrt(r_out);

    const auto npts = static_cast<std::size_t>(std::ceil((x_out - x_in) / h)) + 1;
    if (npts < 8) throw NumericalError("radial grid degenerate for " + state.str());

    std::vector<double> g(npts), phi(npts, 0.0);
    for (std::size_t i = 0; i < npts; ++i)
        g[i] = g_coefficient(x_in + i * h, energy, state.l, species, model);

    // Start in the outer forbidden region with a small value and one WKB-like
    // step of the solution that grows inward.
    const double h2_12 = h * h / 12.0;
    phi[npts - 1] = 1e-10;
    phi[npts - 2] = phi[npts - 1] * std::exp(h * std::sqrt(std::max(g[npts - 1], 0.0)));

    for (std::size_t k = npts - 2; k > 0; --k) {
        const double fkm = 1.0 - h2_12 * g[k - 1];
        const double fk = 1.0 + 5.0 * h * h / 12.0 * g[k];
        const double fkp = 1.0 - h2_12 * g[k + 1];
        phi[k - 1] = (2.0 * fk * phi[k] - fkp * phi[k + 1]) / fkm;
        if (!std::isfinite(phi[k - 1]) || std::abs(phi[k - 1]) > 1e250)
            throw NumericalError("Numerov integration diverged for " + state.str() +
                                 " at r = " + std::to_string((x_in + (k - 1) * h) *
                                                            (x_in + (k - 1) * h)) +
                                 " a.u. (energy " + std::to_string(energy) + " a.u.)");
    }

    RadialWavefunction wf;
    wf.x_start = x_in;
    wf.x_step = h;
    wf.energy_au = energy;
    wf.r.resize(npts);
    wf.p.resize(npts);
    for (std::size_t i = 0; i < npts; ++i) {
        const double x = x_in + i * h;
        wf.r[i] = x * x;
        wf.p[i] = std::sqrt(x) * phi[i];
    }

    // normalise to unit integral of P^2 dr, sign positive at the outer end
    std::vector<double> p2(npts);
    for (std::size_t i = 0; i < npts; ++i) p2[i] = wf.p[i] * wf.p[i];
    const double norm = integrate_dr(wf, p2);
    if (!(norm > 0) || !std::isfinite(norm))
        throw NumericalError("wavefunction norm not positive for " + state.str());
    const double scale = 1.0 / std::sqrt(norm);
    for (auto& v : wf.p) v *= scale;
    wf.normalized = true;

    int nodes = 0;
    for (std::size_t i = 0; i + 1 < npts; ++i)
        if (wf.p[i] * wf.p[i + 1] < 0.0) ++nodes;
    wf.node_count = nodes;

    if (species.is_hydrogenic())
        wf.node_count_warning = (nodes != state.n - state.l - 1);

    return wf;
}

} // namespace rydat
