#pragma once

#include <map>
#include <string>

#include "rydat/numerov.hpp"
#include "rydat/species.hpp"
#include "rydat/states.hpp"

namespace rydat {

/// Prediction table for an externally computed model (quasiclassical or
/// hydrogenic-extrapolation calculators live outside this toolkit). Keys are
/// unordered state pairs; values are radial matrix elements in a.u.
class ExternalModelTable {
public:
    using Key = std::pair<std::tuple<int, int, int>, std::tuple<int, int, int>>;

    explicit ExternalModelTable(std::string name) : name_(std::move(name)) {}

    const std::string& name() const { return name_; }
    std::size_t size() const { return entries_.size(); }

    static Key make_key(const RydbergState& a, const RydbergState& b);
    bool insert(const RydbergState& a, const RydbergState& b, double value_au);
    /// Throws LookupError when the pair is not tabulated.
    double lookup(const RydbergState& a, const RydbergState& b) const;
    bool contains(const RydbergState& a, const RydbergState& b) const;

private:
    std::string name_;
    std::map<Key, double> entries_;
};

/// Parse a model-table file: whitespace-delimited columns
///   n_a l_a j_a n_b l_b j_b value_au
/// with '#' comments. Duplicate pairs are a ParseError.
ExternalModelTable load_external_model(const std::string& path, const std::string& name = "");

/// Which calculation backs a matrix element: one of the built-in radial
/// integrators or a loaded prediction table.
class ModelTag {
public:
    static ModelTag nca() { return ModelTag(ModelKind::NCA, nullptr); }
    static ModelTag mmp() { return ModelTag(ModelKind::MMP, nullptr); }
    static ModelTag external(const ExternalModelTable& table) {
        return ModelTag(ModelKind::External, &table);
    }

    ModelKind kind() const { return kind_; }
    const ExternalModelTable* table() const { return table_; }
    std::string name() const {
        switch (kind_) {
            case ModelKind::NCA: return "NCA";
            case ModelKind::MMP: return "MMP";
            case ModelKind::External: return table_->name();
        }
        return "?";
    }

private:
    ModelTag(ModelKind k, const ExternalModelTable* t) : kind_(k), table_(t) {}
    ModelKind kind_;
    const ExternalModelTable* table_;
};

/// <a|r|b> in a.u. over the common grid (or a table lookup). Sign convention:
/// positive for hydrogen 1s -> 2p. Throws SelectionRuleError unless Δl = 1.
double radial_matrix_element(const RydbergState& a, const RydbergState& b,
                             const SpeciesModel& species, const ModelTag& model,
                             const NumerovOptions& opts = {});

/// Fine-structure reduced dipole element <n_a l_a j_a||d||n_b l_b j_b> in
/// a.u.: radial element times the angular factor from the Wigner module.
double reduced_dipole(const RydbergState& a, const RydbergState& b,
                      const SpeciesModel& species, const ModelTag& model,
                      const NumerovOptions& opts = {});

} // namespace rydat
