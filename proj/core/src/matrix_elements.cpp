#include "rydat/matrix_elements.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "rydat/errors.hpp"
#include "rydat/wigner.hpp"

namespace rydat {

ExternalModelTable::Key ExternalModelTable::make_key(const RydbergState& a,
                                                     const RydbergState& b) {
    std::tuple<int, int, int> ka{a.n, a.l, a.j.twice()};
    std::tuple<int, int, int> kb{b.n, b.l, b.j.twice()};
    if (kb < ka) std::swap(ka, kb);
    return {ka, kb};
}

bool ExternalModelTable::insert(const RydbergState& a, const RydbergState& b,
                                double value_au) {
    return entries_.emplace(make_key(a, b), value_au).second;
}

bool ExternalModelTable::contains(const RydbergState& a, const RydbergState& b) const {
    return entries_.count(make_key(a, b)) > 0;
}

double ExternalModelTable::lookup(const RydbergState& a, const RydbergState& b) const {
    const auto it = entries_.find(make_key(a, b));
    if (it == entries_.end())
        throw LookupError("model table '" + name_ + "' has no entry for " + a.str() +
                          " <-> " + b.str());
    return it->second;
}

ExternalModelTable load_external_model(const std::string& path, const std::string& name) {
    std::ifstream in(path);
    if (!in) throw FileNotFoundError(path);

    ExternalModelTable table(name.empty() ? path : name);
    std::string raw;
    long line = 0;
    while (std::getline(in, raw)) {
        ++line;
        std::string s = raw;
        if (auto hash = s.find('#'); hash != std::string::npos) s = s.substr(0, hash);
        std::istringstream iss(s);
        int na, la, nb, lb;
        double ja, jb, value;
        if (!(iss >> na)) continue;  // blank or comment-only line
        if (!(iss >> la >> ja >> nb >> lb >> jb >> value))
            throw ParseError("model table rows need 7 columns: n_a l_a j_a n_b l_b j_b value_au",
                             line);
        std::string extra;
        if (iss >> extra) throw ParseError("trailing content after value: " + extra, line);

        auto half = [&](double j) {
            const double tw = 2.0 * j;
            if (std::abs(tw - std::round(tw)) > 1e-9)
                throw ParseError("j must be integer or half-integer", line);
            return HalfInteger::from_twice(static_cast<int>(std::round(tw)));
        };
        try {
            const RydbergState a(na, la, half(ja));
            const RydbergState b(nb, lb, half(jb));
            if (!table.insert(a, b, value))
                throw ParseError("duplicate table entry for " + a.str() + " <-> " + b.str(),
                                 line);
        } catch (const DomainError& e) {
            throw ParseError(std::string("invalid state: ") + e.what(), line);
        }
    }
    return table;
}

double radial_matrix_element(const RydbergState& a, const RydbergState& b,
                             const SpeciesModel& species, const ModelTag& model,
                             const NumerovOptions& opts) {
    if (std::abs(a.l - b.l) != 1)
        throw SelectionRuleError("radial matrix element requires |Δl| = 1: " + a.str() +
                                 " -> " + b.str());
    if (model.kind() == ModelKind::External) return model.table()->lookup(a, b);

    const RadialWavefunction wa = numerov_radial(a, species, model.kind(), opts);
    const RadialWavefunction wb = numerov_radial(b, species, model.kind(), opts);
    // same species and step => identical x_start and spacing, index-aligned
    const std::size_t n = std::min(wa.r.size(), wb.r.size());
    std::vector<double> integrand(n);
    for (std::size_t i = 0; i < n; ++i) integrand[i] = wa.p[i] * wa.r[i] * wb.p[i];

    const RadialWavefunction& shorter = (wa.r.size() <= wb.r.size()) ? wa : wb;
    return integrate_dr(shorter, integrand);
}

double reduced_dipole(const RydbergState& a, const RydbergState& b,
                      const SpeciesModel& species, const ModelTag& model,
                      const NumerovOptions& opts) {
    const double angular = reduced_j_factor(a.l, a.j, b.l, b.j);
    return angular * radial_matrix_element(a, b, species, model, opts);
}

} // namespace rydat
