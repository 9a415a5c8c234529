#include "rydat/instrument.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "rydat/constants.hpp"
#include "rydat/units.hpp"

namespace rydat {

namespace {

double uniform_step(const SpectrumTrace& trace) {
    const auto n = trace.detuning.size();
    if (n < 2) throw ConfigError("instrument response needs at least 2 samples");
    const double h = (trace.detuning.back() - trace.detuning.front()) / (n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        const double step = trace.detuning[i + 1] - trace.detuning[i];
        if (std::abs(step - h) > 1e-6 * std::abs(h))
            throw ConfigError("instrument response needs a uniform detuning grid");
    }
    return h;
}

// Lorentzian kernel integrated over grid cells; clamped-edge convolution so a
// constant trace is preserved exactly.
std::vector<double> lorentzian_convolve(const std::vector<double>& x, double h, double hwhm) {
    const auto n = static_cast<long>(x.size());
    std::vector<double> kernel(2 * n - 1);
    double sum = 0.0;
    for (long j = -(n - 1); j <= n - 1; ++j) {
        const double upper = (j + 0.5) * h;
        const double lower = (j - 0.5) * h;
        const double k = (std::atan(upper / hwhm) - std::atan(lower / hwhm)) / constants::pi;
        kernel[j + n - 1] = k;
        sum += k;
    }
    for (auto& k : kernel) k /= sum;

    std::vector<double> out(n);
    for (long i = 0; i < n; ++i) {
        double acc = 0.0;
        for (long j = -(n - 1); j <= n - 1; ++j) {
            const long idx = std::clamp(i - j, 0L, n - 1);
            acc += kernel[j + n - 1] * x[idx];
        }
        out[i] = acc;
    }
    return out;
}

// First-order low-pass along the sweep; exact zero-order-hold discretisation
// y' = (x - y)/tau, initialised at the first swept sample.
void low_pass_in_place(std::vector<double>& x, double dt, double tau, SweepDirection dir) {
    const double alpha = 1.0 - std::exp(-dt / tau);
    if (dir == SweepDirection::Up) {
        double y = x.front();
        for (auto& v : x) {
            y += alpha * (v - y);
            v = y;
        }
    } else {
        double y = x.back();
        for (auto it = x.rbegin(); it != x.rend(); ++it) {
            y += alpha * (*it - y);
            *it = y;
        }
    }
}

} // namespace

SpectrumTrace apply_instrument(const SpectrumTrace& trace, const InstrumentModel& inst) {
    trace.validate();
    inst.validate();
    if (trace.stage != TraceStage::Ideal)
        throw ConfigError("apply_instrument expects an ideal (pre-instrument) trace");

    const double h = uniform_step(trace);
    SpectrumTrace out = trace;
    out.stage = TraceStage::Instrumented;

    if (inst.linewidth_hz > 0) {
        const double hwhm = 0.5 * units::hz_to_rads(inst.linewidth_hz);
        out.value = lorentzian_convolve(out.value, h, hwhm);
    }

    const double dt = h / inst.sweep_rate();  // seconds between samples
    const double tau = 1.0 / (2.0 * constants::pi * inst.corner_hz);
    low_pass_in_place(out.value, dt, tau, inst.direction);
    return out;
}

SpectrumTrace add_noise(const SpectrumTrace& trace, double sigma_rel, std::uint64_t seed) {
    if (sigma_rel < 0) throw DomainError("noise level must be non-negative");
    if (sigma_rel == 0) return trace;

    SpectrumTrace out = trace;
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (auto& v : out.value) v *= 1.0 + sigma_rel * gauss(rng);
    return out;
}

} // namespace rydat
