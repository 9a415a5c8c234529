#include "rydat/fitting.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <string>

#include "rydat/errors.hpp"
#include "rydat/levmar.hpp"

namespace rydat {

namespace {

double robust_noise_estimate(const std::vector<double>& values) {
    if (values.size() < 3) return 0.0;
    std::vector<double> diffs;
    diffs.reserve(values.size() - 1);
    for (std::size_t i = 0; i + 1 < values.size(); ++i)
        diffs.push_back(std::abs(values[i + 1] - values[i]));
    std::nth_element(diffs.begin(), diffs.begin() + diffs.size() / 2, diffs.end());
    const double median = diffs[diffs.size() / 2];
    // median |x_{i+1}-x_i| of white noise = sigma * sqrt(2) * 0.6745
    return median / (std::sqrt(2.0) * 0.6745);
}

double lorentz(double delta, double center, double gamma) {
    const double d = delta - center;
    return 1.0 / (1.0 + 4.0 * d * d / (gamma * gamma));
}

// full width of the region around `idx` where the trace stays beyond the
// half-way level between baseline and extremum; fallback when degenerate
double half_level_width(const SpectrumTrace& t, std::size_t idx, double baseline) {
    const double half = 0.5 * (baseline + t.value[idx]);
    const bool dip = t.value[idx] < baseline;
    std::size_t lo = idx, hi = idx;
    while (lo > 0 && (dip ? t.value[lo] < half : t.value[lo] > half)) --lo;
    while (hi + 1 < t.value.size() && (dip ? t.value[hi] < half : t.value[hi] > half)) ++hi;
    const double w = t.detuning[hi] - t.detuning[lo];
    if (w > 0) return w;
    return (t.detuning.back() - t.detuning.front()) / 10.0;
}

} // namespace

TwoLevelFit fit_two_level(const SpectrumTrace& trace, const InstrumentModel* instrument) {
    trace.validate();
    if (trace.detuning.size() < 8)
        throw InsufficientDataError("two-level fit needs at least 8 samples");

    const double noise = robust_noise_estimate(trace.value);
    const double vmax = *std::max_element(trace.value.begin(), trace.value.end());
    const double vmin = *std::min_element(trace.value.begin(), trace.value.end());
    const double feature = vmax - vmin;
    if (feature < std::max(3.0 * noise, 1e-12 * std::max(std::abs(vmax), 1.0)))
        throw NoSignalError("no line detected: feature depth " + std::to_string(feature) +
                            " below 3x noise floor " + std::to_string(3.0 * noise));

    const bool transmission = trace.kind == ValueKind::Transmission;
    const std::size_t extremum =
        transmission
            ? std::min_element(trace.value.begin(), trace.value.end()) - trace.value.begin()
            : std::max_element(trace.value.begin(), trace.value.end()) - trace.value.begin();

    const double baseline0 = transmission ? vmax : vmin;
    const double center0 = trace.detuning[extremum];
    const double gamma0 = half_level_width(trace, extremum, baseline0);
    const double depth0 =
        transmission ? std::max(-std::log(std::max(vmin, 1e-12) / std::max(vmax, 1e-12)), 1e-3)
                     : feature;

    auto model_values = [&](double gamma, double center, double a, double b) {
        SpectrumTrace m;
        m.detuning = trace.detuning;
        m.kind = trace.kind;
        m.stage = TraceStage::Ideal;
        m.value.resize(trace.detuning.size());
        for (std::size_t i = 0; i < m.value.size(); ++i) {
            const double L = lorentz(trace.detuning[i], center, gamma);
            m.value[i] = transmission ? b * std::exp(-a * L) : b + a * L;
        }
        if (instrument) m = apply_instrument(m, *instrument);
        return m.value;
    };

    // p = [ln gamma, center, ln a, b or ln b]; amplitude-like parameters are
    // kept positive through logs
    Eigen::VectorXd p(4);
    p << std::log(gamma0), center0, std::log(std::max(depth0, 1e-6)),
        transmission ? std::log(std::max(baseline0, 1e-12)) : vmin;

    auto residual = [&](const Eigen::VectorXd& q) {
        const double gamma = std::exp(q[0]);
        const double a = std::exp(q[2]);
        const double b = transmission ? std::exp(q[3]) : q[3];
        const auto mv = model_values(gamma, q[1], a, b);
        Eigen::VectorXd r(mv.size());
        for (std::size_t i = 0; i < mv.size(); ++i) r[i] = mv[i] - trace.value[i];
        return r;
    };

    LevMarOptions opt;
    opt.parameter_scales = Eigen::VectorXd(4);
    opt.parameter_scales << 1.0, gamma0, 1.0, transmission ? 1.0 : std::abs(vmax);
    const LevMarResult res = levmar_fit(residual, p, opt);

    TwoLevelFit out;
    out.gamma_eff = std::exp(res.parameters[0]);
    out.gamma_eff_err = out.gamma_eff * res.standard_errors[0];
    out.center = res.parameters[1];
    out.center_err = res.standard_errors[1];
    out.depth = std::exp(res.parameters[2]);
    out.chi2_reduced = res.chi2_reduced;
    out.converged = res.converged;
    out.iterations = res.iterations;
    return out;
}

namespace {

// Memo for the expensive shape part of the AT model; amplitude/baseline
// perturbations in the numeric Jacobian then reuse the cached trace.
class ShapeCache {
public:
    const std::vector<double>* find(double u, double v, double d) const {
        for (const auto& e : entries_)
            if (e.u == u && e.v == v && e.d == d) return &e.values;
        return nullptr;
    }
    void store(double u, double v, double d, std::vector<double> values) {
        entries_.push_front({u, v, d, std::move(values)});
        if (entries_.size() > 8) entries_.pop_back();
    }

private:
    struct Entry {
        double u, v, d;
        std::vector<double> values;
    };
    std::deque<Entry> entries_;
};

struct DipSeeds {
    double omega = 0.0;
    double delta = 0.0;
};

DipSeeds seed_from_dips(const SpectrumTrace& trace, double gamma) {
    // local minima of a lightly smoothed trace, deepest two first
    const auto& y = trace.value;
    const std::size_t n = y.size();
    std::vector<double> s(n);
    for (std::size_t i = 0; i < n; ++i) {
        double acc = 0.0;
        int cnt = 0;
        for (long k = -2; k <= 2; ++k) {
            const long idx = static_cast<long>(i) + k;
            if (idx >= 0 && idx < static_cast<long>(n)) {
                acc += y[idx];
                ++cnt;
            }
        }
        s[i] = acc / cnt;
    }
    const double top = *std::max_element(s.begin(), s.end());
    const double bottom = *std::min_element(s.begin(), s.end());
    const double gate = top - 0.25 * (top - bottom);

    std::vector<std::pair<double, double>> dips;  // (value, detuning)
    for (std::size_t i = 2; i + 2 < n; ++i)
        if (s[i] < gate && s[i] <= s[i - 1] && s[i] <= s[i + 1] && s[i] < s[i - 2] &&
            s[i] < s[i + 2])
            dips.emplace_back(s[i], trace.detuning[i]);
    std::sort(dips.begin(), dips.end());

    DipSeeds out;
    if (dips.size() >= 2) {
        // dressed-state positions: -Δ/2 ± sqrt(Δ² + Ω²)/2
        const double d1 = dips[0].second, d2 = dips[1].second;
        const double sep = std::abs(d2 - d1);
        const double mid = 0.5 * (d1 + d2);
        out.delta = -2.0 * mid;
        const double o2 = sep * sep - out.delta * out.delta;
        out.omega = std::sqrt(std::max(o2, 0.09 * gamma * gamma));
    } else {
        out.omega = 0.5 * gamma;
        out.delta = 0.0;
    }
    return out;
}

} // namespace

FitResult fit_at_spectrum(const SpectrumTrace& trace, double sigma0, const BeamGeometry& beam,
                          const CloudModel& cloud, const AtFitConfig& cfg) {
    trace.validate();
    if (trace.kind != ValueKind::Transmission)
        throw ConfigError("AT fits expect a transmission trace");
    if (!(cfg.gamma_fixed > 0)) throw ConfigError("AT fit needs the fixed Γ from the two-level step");
    if (cfg.mode == AtFitMode::InstrumentForward && !cfg.instrument)
        throw ConfigError("instrument-forward fit mode needs an instrument model");
    if (trace.detuning.size() < 16)
        throw InsufficientDataError("AT fit needs at least 16 samples");

    BeamGeometry unit_beam = beam;
    unit_beam.omega_max = 1.0;  // quadrature stores the profile; Ω_max scales it
    const SignalQuadrature quad(unit_beam, cloud, cfg.quadrature);

    ShapeCache cache;
    long evaluations = 0;
    auto shape = [&](double u, double v, double d) -> const std::vector<double>& {
        if (const auto* hit = cache.find(u, v, d)) return *hit;
        LadderSystem sys;
        sys.gamma = cfg.gamma_fixed;
        sys.gamma3 = std::exp(v);
        sys.sigma0 = sigma0;
        sys.delta_c = d;
        const double omega = std::exp(u);

        SpectrumTrace m;
        m.detuning = trace.detuning;
        m.kind = ValueKind::Transmission;
        m.stage = TraceStage::Ideal;
        m.value.resize(trace.detuning.size());
        for (std::size_t i = 0; i < m.value.size(); ++i)
            m.value[i] = quad.transmission(trace.detuning[i], sys, omega);
        if (cfg.mode == AtFitMode::InstrumentForward) m = apply_instrument(m, *cfg.instrument);
        ++evaluations;
        cache.store(u, v, d, std::move(m.value));
        return *cache.find(u, v, d);
    };

    const double a0 = *std::max_element(trace.value.begin(), trace.value.end());
    const DipSeeds seeds = seed_from_dips(trace, cfg.gamma_fixed);
    const double omega0 = cfg.omega_seed.value_or(seeds.omega);
    const double delta0 = cfg.delta_seed.value_or(seeds.delta);
    const double gamma30 = cfg.gamma3_seed > 0 ? cfg.gamma3_seed : 0.25 * cfg.gamma_fixed;

    auto residual = [&](const Eigen::VectorXd& q) {
        const auto& t = shape(q[0], q[1], q[2]);
        Eigen::VectorXd r(t.size());
        for (std::size_t i = 0; i < t.size(); ++i)
            r[i] = q[3] * t[i] + q[4] - trace.value[i];
        return r;
    };

    // try a few Ω starting points and keep the cheapest initial cost
    Eigen::VectorXd best(5);
    double best_cost = std::numeric_limits<double>::infinity();
    for (double factor : {1.0, 2.0, 0.5}) {
        Eigen::VectorXd q(5);
        q << std::log(std::max(omega0 * factor, 1e-3 * cfg.gamma_fixed)), std::log(gamma30),
            delta0, a0, 0.0;
        const double cost = residual(q).squaredNorm();
        if (cost < best_cost) {
            best_cost = cost;
            best = q;
        }
    }

    LevMarOptions opt;
    opt.parameter_scales = Eigen::VectorXd(5);
    opt.parameter_scales << 1.0, 1.0, std::max(cfg.gamma_fixed, std::abs(delta0)),
        std::max(a0, 1e-3), std::max(a0, 1e-3);
    const LevMarResult res = levmar_fit(residual, best, opt);
    if (!res.converged)
        throw NumericalError(
            "AT fit did not converge within the iteration cap; last iterate: Ω=" +
            std::to_string(std::exp(res.parameters[0])) + " rad/s, γ₃=" +
            std::to_string(std::exp(res.parameters[1])) + " rad/s, Δ=" +
            std::to_string(res.parameters[2]) + " rad/s (" + res.message + ")");

    FitResult out;
    out.omega_max = std::exp(res.parameters[0]);
    out.omega_max_err = out.omega_max * res.standard_errors[0];
    out.gamma3 = std::exp(res.parameters[1]);
    out.gamma3_err = out.gamma3 * res.standard_errors[1];
    out.delta_c = res.parameters[2];
    out.delta_c_err = res.standard_errors[2];
    out.amplitude = res.parameters[3];
    out.amplitude_err = res.standard_errors[3];
    out.baseline = res.parameters[4];
    out.baseline_err = res.standard_errors[4];
    out.chi2_reduced = res.chi2_reduced;
    out.converged = res.converged;
    out.degenerate_omega = out.omega_max_err >= out.omega_max;
    out.iterations = res.iterations;
    out.model_evaluations = evaluations;
    out.covariance = res.covariance;
    return out;
}

WaistFit fit_beam_waists(const TransmissionImage& image, const LadderSystem& sys,
                         const CloudModel& cloud, const BeamGeometry& beam_prior) {
    if (image.nx < 8 || image.ny < 8)
        throw ConfigError("waist fit needs at least an 8x8 image");
    beam_prior.validate();

    const double noise = robust_noise_estimate(image.values);
    const double t_min = *std::min_element(image.values.begin(), image.values.end());
    const double t_center = image.at(image.nx / 2, image.ny / 2);
    const double hole_depth = t_center - t_min;
    if (hole_depth < std::max(3.0 * noise, 1e-9))
        throw InsufficientContrastError("EIT hole depth " + std::to_string(hole_depth) +
                                        " below 3x image noise " + std::to_string(3.0 * noise));

    const double a0 = *std::max_element(image.values.begin(), image.values.end());

    auto residual = [&](const Eigen::VectorXd& q) {
        BeamGeometry b = beam_prior;
        b.w_maj = std::exp(q[0]);
        b.w_min = std::exp(q[1]);
        b.omega_max = std::exp(q[2]);
        const double amp = std::exp(q[3]);
        Eigen::VectorXd r(image.values.size());
        std::size_t k = 0;
        for (int iy = 0; iy < image.ny; ++iy) {
            const double y = image.y_of(iy);
            for (int ix = 0; ix < image.nx; ++ix, ++k) {
                const double x = image.x_of(ix);
                const double sigma = probe_cross_section(0.0, sys, rabi_profile(x, y, b));
                const double model = amp * std::exp(-sigma * column_density(x, y, cloud));
                r[k] = model - image.values[k];
            }
        }
        return r;
    };

    Eigen::VectorXd p(4);
    p << std::log(beam_prior.w_maj), std::log(beam_prior.w_min),
        std::log(std::max(beam_prior.omega_max, 0.1 * sys.gamma)), std::log(std::max(a0, 1e-6));
    const LevMarResult res = levmar_fit(residual, p);

    WaistFit out;
    out.w_maj = std::exp(res.parameters[0]);
    out.w_maj_err = out.w_maj * res.standard_errors[0];
    out.w_min = std::exp(res.parameters[1]);
    out.w_min_err = out.w_min * res.standard_errors[1];
    out.omega_max = std::exp(res.parameters[2]);
    out.omega_max_err = out.omega_max * res.standard_errors[2];
    out.chi2_reduced = res.chi2_reduced;
    out.converged = res.converged;
    return out;
}

PowerSeriesFit fit_power_series(const std::vector<PowerSeriesPoint>& points) {
    if (points.size() < 3)
        throw InsufficientDataError("power-series regression needs at least 3 points");
    double first = points.front().power;
    bool distinct = false;
    for (const auto& pt : points) {
        if (!(pt.omega_err > 0)) throw ConfigError("power-series points need σ_Ω > 0");
        if (pt.power < 0) throw ConfigError("power must be non-negative");
        if (pt.power != first) distinct = true;
    }
    if (!distinct)
        throw InsufficientDataError("power-series regression needs at least 2 distinct powers");

    double sw = 0, sx = 0, sxx = 0, sy = 0, sxy = 0;
    for (const auto& pt : points) {
        const double w = 1.0 / (pt.omega_err * pt.omega_err);
        const double x = std::sqrt(pt.power);
        sw += w;
        sx += w * x;
        sxx += w * x * x;
        sy += w * pt.omega_max;
        sxy += w * x * pt.omega_max;
    }
    const double det = sw * sxx - sx * sx;
    if (!(det > 0)) throw InsufficientDataError("degenerate power-series design matrix");

    PowerSeriesFit fit;
    fit.gradient = (sw * sxy - sx * sy) / det;
    fit.intercept = (sxx * sy - sx * sxy) / det;
    fit.gradient_err = std::sqrt(sw / det);
    fit.intercept_err = std::sqrt(sxx / det);

    double chi2 = 0;
    for (const auto& pt : points) {
        const double r =
            (pt.omega_max - fit.gradient * std::sqrt(pt.power) - fit.intercept) / pt.omega_err;
        chi2 += r * r;
    }
    fit.chi2_reduced = points.size() > 2 ? chi2 / (points.size() - 2) : 0.0;
    fit.intercept_zero_sigma =
        fit.intercept_err > 0 ? std::abs(fit.intercept) / fit.intercept_err : 0.0;
    return fit;
}

double calibrate_sweep_span(const LadderSystem& sys, InstrumentModel inst,
                            double target_width, double span_min, double span_max,
                            const std::vector<double>& grid) {
    if (!(span_min > 0) || !(span_max > span_min))
        throw ConfigError("calibration needs 0 < span_min < span_max");

    auto width_at = [&](double span) {
        inst.sweep_span = span;
        const SpectrumTrace ideal = cross_section_trace(grid, sys, 0.0);
        const SpectrumTrace broadened = apply_instrument(ideal, inst);
        return fit_two_level(broadened, nullptr).gamma_eff;
    };

    double lo = span_min, hi = span_max;
    const double w_lo = width_at(lo), w_hi = width_at(hi);
    if (!(w_lo <= target_width && target_width <= w_hi))
        throw ConfigError("target width not bracketed by the sweep-span search range (" +
                          std::to_string(w_lo) + " .. " + std::to_string(w_hi) + " rad/s)");

    for (int i = 0; i < 60; ++i) {
        const double mid = 0.5 * (lo + hi);
        const double w = width_at(mid);
        if (std::abs(w - target_width) < 1e-6 * target_width) return mid;
        (w < target_width ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

} // namespace rydat
