#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "rydat/half_integer.hpp"
#include "rydat/states.hpp"

namespace rydat {

/// Rydberg-Ritz expansion delta(n) = d0 + d2/(n-d0)^2 + d4/(n-d0)^4 + ...
/// for one (l, j) series. Coefficients come from the species data file.
struct QuantumDefectSeries {
    int l = 0;
    HalfInteger j;
    std::vector<double> coefficients;  // d0, d2, d4, ...
};

/// Marinescu-style parametric core potential coefficients for one l.
struct CorePotentialCoefficients {
    double a1 = 0, a2 = 0, a3 = 0, a4 = 0;
    double r_c = 1.0;
};

enum class ModelKind { NCA, MMP, External };

/// Everything species-specific the structure calculations need, loaded from a
/// key-value data file and immutable afterwards.
class SpeciesModel {
public:
    static SpeciesModel load(const std::string& path);

    const std::string& name() const { return name_; }
    double rydberg_constant_au() const { return rydberg_au_; }
    int core_charge() const { return core_charge_; }
    double core_polarizability_au() const { return alpha_c_; }
    HalfInteger nuclear_spin() const { return nuclear_spin_; }

    /// Defect series for (l, j); throws ConfigError when the file carries
    /// none (unless the file declared zero defects for missing series).
    const QuantumDefectSeries& defect_series(int l, HalfInteger j) const;
    bool has_defect_series(int l, HalfInteger j) const;

    /// Potential coefficients for l (the highest configured l acts for all
    /// larger l, the usual convention for these parameterisations).
    const CorePotentialCoefficients& potential_coefficients(int l) const;

    /// Literature energy for a low anchor state, if configured.
    std::optional<double> anchor_energy_au(const RydbergState& s) const;

    /// True when every defect series in the file is identically zero
    /// (hydrogenic species); used to enable exact node-count checks.
    bool is_hydrogenic() const;

private:
    std::string name_;
    double rydberg_au_ = 0.5;
    int core_charge_ = 1;
    double alpha_c_ = 0.0;
    HalfInteger nuclear_spin_;
    bool zero_defects_for_missing_ = false;
    std::map<std::pair<int, int>, QuantumDefectSeries> defects_;  // key (l, 2j)
    std::map<int, CorePotentialCoefficients> potentials_;
    std::map<std::tuple<int, int, int>, double> anchors_;  // key (n, l, 2j)
    mutable QuantumDefectSeries zero_series_;
};

/// Rydberg-Ritz evaluation. Throws DomainError when n - d0 <= 0.
double quantum_defect(const QuantumDefectSeries& series, int n);

/// n* = n - delta(n, l, j). Throws ConfigError for a missing series and
/// DomainError when the result would be non-positive.
double effective_n(const RydbergState& state, const SpeciesModel& species);

/// E = -Ry'/(n*)^2 in atomic units (negative).
double binding_energy(const RydbergState& state, const SpeciesModel& species);

/// Energy used for radial integration: the configured anchor energy when the
/// state has one, otherwise the quantum-defect value.
double state_energy(const RydbergState& state, const SpeciesModel& species);

/// Effective radial potential (including the centrifugal term) in a.u.
/// NCA: -1/r + l(l+1)/2r^2. MMP: Marinescu core potential plus centrifugal.
/// Throws DomainError for r <= 0 and ConfigError for ModelKind::External.
double potential(double r, int l, const SpeciesModel& species, ModelKind model);

} // namespace rydat
