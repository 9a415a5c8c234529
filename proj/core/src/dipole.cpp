#include "rydat/dipole.hpp"

#include <algorithm>
#include <cmath>

#include "rydat/constants.hpp"
#include "rydat/errors.hpp"
#include "rydat/units.hpp"

namespace rydat {

DipoleEstimate dipole_from_gradient(double gradient, double gradient_err, double w_maj,
                                    double w_maj_err, double w_min, double w_min_err,
                                    double power_rel_err, int n_label) {
    if (!(gradient > 0)) throw DomainError("gradient must be positive");
    if (!(w_maj > 0) || !(w_min > 0)) throw DomainError("waists must be positive");
    if (gradient_err < 0 || w_maj_err < 0 || w_min_err < 0 || power_rel_err < 0)
        throw DomainError("uncertainties must be non-negative");

    using namespace constants;
    const double mu = gradient * 0.5 * hbar *
                      std::sqrt(pi * w_maj * w_min * speed_of_light * epsilon0);

    const double rel2 = std::pow(gradient_err / gradient, 2) +
                        std::pow(0.5 * power_rel_err, 2) +
                        std::pow(0.5 * w_maj_err / w_maj, 2) +
                        std::pow(0.5 * w_min_err / w_min, 2);
    const double rel = std::sqrt(rel2);

    DipoleEstimate est;
    est.n = n_label;
    est.mu_cm = mu;
    est.mu_err_cm = mu * rel;
    est.mu_au = units::cm_to_au(mu);
    est.mu_err_au = est.mu_au * rel;
    return est;
}

double to_reduced(DipoleEstimate& estimate, const HyperfineTransition& transition) {
    const double coeff = stretched_hyperfine_factor(transition);
    if (coeff == 0.0)
        throw SelectionRuleError("angular coefficient vanishes for this transition");
    estimate.reduced_au = estimate.mu_au / coeff;
    estimate.reduced_err_au = std::abs(estimate.mu_err_au / coeff);
    return estimate.reduced_au;
}

ModelComparison chi_squared_compare(
    const std::vector<DipoleEstimate>& measured,
    const std::map<std::string, std::map<int, double>>& model_reduced_au) {
    if (measured.empty()) throw InsufficientDataError("no measured dipole estimates");
    if (model_reduced_au.empty()) throw InsufficientDataError("no model tables to compare");

    ModelComparison cmp;
    for (const auto& [name, table] : model_reduced_au) {
        double chi2 = 0.0;
        for (const auto& est : measured) {
            const auto it = table.find(est.n);
            if (it == table.end())
                throw LookupError("model '" + name + "' has no prediction for n=" +
                                  std::to_string(est.n));
            if (!(est.reduced_err_au > 0))
                throw ConfigError("measured estimate for n=" + std::to_string(est.n) +
                                  " carries no uncertainty; run to_reduced first");
            const double r = (est.reduced_au - it->second) / est.reduced_err_au;
            chi2 += r * r;
        }
        cmp.ranking.push_back({name, chi2});
    }
    std::stable_sort(cmp.ranking.begin(), cmp.ranking.end(),
                     [](const auto& a, const auto& b) {
                         if (a.chi2 != b.chi2) return a.chi2 < b.chi2;
                         return a.model < b.model;
                     });
    return cmp;
}

} // namespace rydat
