#pragma once

#include <optional>
#include <string>
#include <vector>

#include "rydat/config.hpp"
#include "rydat/dipole.hpp"
#include "rydat/fitting.hpp"
#include "rydat/matrix_elements.hpp"

namespace rydat {

struct PowerPointRecord {
    double power_true = 0.0;      // W, as generated/recorded
    double power_analysis = 0.0;  // W, as the analysis believes (calibration)
    FitResult fit;
    std::string spectrum_file;    // relative to the output directory
};

struct PerNResult {
    int n = 0;
    bool ok = false;
    std::string error;  // diagnostic when a stage aborted this n
    std::vector<PowerPointRecord> points;
    PowerSeriesFit series;
    DipoleEstimate estimate;
};

struct PipelineResult {
    std::vector<PerNResult> per_n;
    std::optional<ModelComparison> comparison;
    /// reduced elements (lower-normalised convention, a.u.) per model per n
    std::map<std::string, std::map<int, double>> model_tables;
    std::vector<std::string> warnings;
    double gamma_fit = 0.0;  // rad/s, the Γ the AT fits held fixed
    std::uint64_t outputs_digest = 0;
    std::vector<std::string> written_files;  // relative paths
    std::string out_dir;
};

/// The full inverse pipeline: per n, simulate (or load) spectra at each
/// coupling power, fit them with the beam/cloud forward model, regress
/// Ω_max against sqrt(P), extract the dipole moment with propagated errors,
/// rescale to a reduced element, then rank theory models by chi-squared.
/// A stage error aborts only its n; everything is deterministic for fixed
/// config and seed, and all artifacts land under out_dir with a ledger entry.
PipelineResult run_pipeline(const RunConfig& cfg, const std::string& out_dir);

/// Write plot-ready delimited files (Ω vs sqrt(P) per n; reduced elements vs
/// n with one overlay column per model). Returns the relative paths written.
std::vector<std::string> emit_plot_data(const PipelineResult& result,
                                        const std::string& out_dir);

/// Append-only reproducibility ledger: timestamp, config hash, command,
/// digest over the run's output files.
void ledger_append(const std::string& out_dir, const std::string& command,
                   std::uint64_t config_hash, std::uint64_t outputs_digest);

/// Reduced element (lower-normalised convention) of lower -> upper for one
/// model, a.u.; the quantity the measurement chain recovers.
double model_reduced_element(const RydbergState& lower, const RydbergState& upper,
                             const SpeciesModel& species, const ModelTag& model);

} // namespace rydat
