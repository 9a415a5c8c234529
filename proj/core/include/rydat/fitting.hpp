#pragma once

#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "rydat/instrument.hpp"
#include "rydat/lineshape.hpp"
#include "rydat/spectrum.hpp"

namespace rydat {

/// Result of the coupling-free (two-level) line fit.
struct TwoLevelFit {
    double gamma_eff = 0.0;      // fitted FWHM, rad/s
    double gamma_eff_err = 0.0;
    double center = 0.0;         // line center, rad/s
    double center_err = 0.0;
    double depth = 0.0;          // peak optical depth (transmission traces)
    double chi2_reduced = 0.0;
    bool converged = false;
    int iterations = 0;
};

/// Fit the coupling-free model to a trace and return the effective width.
/// Cross-section traces are fitted with baseline + Lorentzian; transmission
/// traces with amplitude * exp(-depth * Lorentzian), which undoes the
/// optical-depth saturation of the dip. When an instrument model is given it
/// is forward-modelled inside the fit, so the natural width is recovered from
/// broadened data; without one the fit reports the broadened effective width,
/// which is how the detector chain is quantified in the first place.
/// Throws NoSignalError when no dip/peak rises 3x above the noise floor.
TwoLevelFit fit_two_level(const SpectrumTrace& trace,
                          const InstrumentModel* instrument = nullptr);

enum class AtFitMode {
    /// Full forward model: natural Γ plus the calibrated instrument response.
    InstrumentForward,
    /// Ideal lineshape with the broadened effective Γ, no filter in the fit.
    EffectiveWidth,
};

struct AtFitConfig {
    double gamma_fixed = 0.0;  // rad/s; natural or effective depending on mode
    AtFitMode mode = AtFitMode::InstrumentForward;
    const InstrumentModel* instrument = nullptr;  // required for InstrumentForward
    QuadratureConfig quadrature;
    double gamma3_seed = 0.0;  // rad/s; e.g. the 2.5 MHz instrumental floor
    std::optional<double> omega_seed;  // override the dip-separation auto-seed
    std::optional<double> delta_seed;
};

/// Recovered Autler-Townes fit parameters with curvature errors.
struct FitResult {
    double omega_max = 0.0, omega_max_err = 0.0;  // rad/s
    double gamma3 = 0.0, gamma3_err = 0.0;        // rad/s
    double delta_c = 0.0, delta_c_err = 0.0;      // rad/s
    double amplitude = 0.0, amplitude_err = 0.0;
    double baseline = 0.0, baseline_err = 0.0;
    double chi2_reduced = 0.0;
    bool converged = false;
    bool degenerate_omega = false;  // error bar on Ω_max covers zero
    int iterations = 0;
    long model_evaluations = 0;
    Eigen::MatrixXd covariance;  // over (ln Ω, ln γ₃, Δ, A, B)
};

/// Fit the full beam-and-cloud forward model to an AT transmission trace.
/// Γ stays fixed (determined by the two-level step); free parameters are
/// Ω_max, γ₃, Δ plus amplitude and baseline. Ω_max and γ₃ run through log
/// transforms so positivity holds by construction. Deterministic.
/// Throws NumericalError if the optimiser hits the iteration cap.
FitResult fit_at_spectrum(const SpectrumTrace& trace, double sigma0, const BeamGeometry& beam,
                          const CloudModel& cloud, const AtFitConfig& cfg);

/// Waists recovered from a transmission image of the EIT hole.
struct WaistFit {
    double w_maj = 0.0, w_maj_err = 0.0;  // m
    double w_min = 0.0, w_min_err = 0.0;  // m
    double omega_max = 0.0, omega_max_err = 0.0;
    double chi2_reduced = 0.0;
    bool converged = false;
};

/// 2D least-squares fit of the transverse transmission map to an absorption
/// image, axes aligned with the image grid. The beam prior seeds waists and
/// peak Rabi frequency. Throws InsufficientContrastError when the hole depth
/// is below 3x the image noise.
WaistFit fit_beam_waists(const TransmissionImage& image, const LadderSystem& sys,
                         const CloudModel& cloud, const BeamGeometry& beam_prior);

struct PowerSeriesPoint {
    double power = 0.0;      // W
    double omega_max = 0.0;  // rad/s
    double omega_err = 0.0;  // rad/s, > 0
};

struct PowerSeriesFit {
    double gradient = 0.0, gradient_err = 0.0;    // rad/s per sqrt(W)
    double intercept = 0.0, intercept_err = 0.0;  // rad/s
    double chi2_reduced = 0.0;
    double intercept_zero_sigma = 0.0;  // |intercept| / intercept_err
};

/// Weighted linear least squares of Ω_max against sqrt(P) with a free
/// intercept. Throws InsufficientDataError for fewer than 3 points or fewer
/// than 2 distinct powers.
PowerSeriesFit fit_power_series(const std::vector<PowerSeriesPoint>& points);

/// One-time sweep-span calibration: find the span (rad/s, bisection inside
/// [span_min, span_max]) for which the instrument-broadened two-level line of
/// the given system fits to target_width. The grid sets the simulated trace.
double calibrate_sweep_span(const LadderSystem& sys, InstrumentModel inst,
                            double target_width, double span_min, double span_max,
                            const std::vector<double>& grid);

} // namespace rydat
