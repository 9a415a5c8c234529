#pragma once

#include <map>
#include <string>
#include <vector>

#include "rydat/wigner.hpp"

namespace rydat {

/// A measured transition dipole moment with propagated uncertainty, plus the
/// angular-rescaled reduced matrix element once to_reduced has run.
struct DipoleEstimate {
    int n = 0;  // principal quantum number of the upper state
    double mu_cm = 0.0, mu_err_cm = 0.0;  // stretched-transition dipole, C·m
    double mu_au = 0.0, mu_err_au = 0.0;  // same in atomic units
    double reduced_au = 0.0, reduced_err_au = 0.0;
};

/// Invert Ω_max = (2μ/ħ) sqrt(P/(π w_maj w_min c ε₀)) for μ from the fitted
/// gradient g = dΩ/d√P, and propagate the quoted uncertainties:
/// (σ_μ/μ)² = (σ_g/g)² + (σ_P/2P)² + (σ_wmaj/2w_maj)² + (σ_wmin/2w_min)².
DipoleEstimate dipole_from_gradient(double gradient, double gradient_err, double w_maj,
                                    double w_maj_err, double w_min, double w_min_err,
                                    double power_rel_err, int n_label);

/// Rescale the stretched-transition dipole to the reduced matrix element by
/// dividing out the hyperfine angular coefficient. Fills the reduced fields
/// of the estimate and returns the reduced element (a.u.).
/// Throws SelectionRuleError when the coefficient vanishes.
double to_reduced(DipoleEstimate& estimate, const HyperfineTransition& transition);

/// Per-model chi-squared over a measured set, ranked best (smallest) first.
struct ModelComparison {
    struct Entry {
        std::string model;
        double chi2 = 0.0;
    };
    std::vector<Entry> ranking;

    const std::string& best() const { return ranking.front().model; }
};

/// χ²(model) = Σ_n (μ_n^meas − μ_n^model)² / σ_n² over the reduced elements.
/// Every measured n must be present in every model table; a missing entry is
/// a LookupError naming the model and n.
ModelComparison chi_squared_compare(
    const std::vector<DipoleEstimate>& measured,
    const std::map<std::string, std::map<int, double>>& model_reduced_au);

} // namespace rydat
