#include "rydat/species.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "rydat/errors.hpp"

namespace rydat {

namespace {

// "1.5" or "3/2" -> HalfInteger
HalfInteger parse_half_integer(const std::string& tok, long line) {
    if (auto slash = tok.find('/'); slash != std::string::npos) {
        const int num = std::stoi(tok.substr(0, slash));
        const int den = std::stoi(tok.substr(slash + 1));
        if (den != 2) throw ParseError("half-integer denominators must be 2: " + tok, line);
        return HalfInteger::from_twice(num);
    }
    const double v = std::stod(tok);
    const double tw = 2.0 * v;
    if (std::abs(tw - std::round(tw)) > 1e-9)
        throw ParseError("not an integer or half-integer: " + tok, line);
    return HalfInteger::from_twice(static_cast<int>(std::round(tw)));
}

std::vector<std::string> split_ws(const std::string& s) {
    std::istringstream iss(s);
    std::vector<std::string> out;
    std::string t;
    while (iss >> t) out.push_back(t);
    return out;
}

std::string strip(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

} // namespace

SpeciesModel SpeciesModel::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw FileNotFoundError(path);

    SpeciesModel m;
    m.name_ = path;
    std::string raw;
    long line = 0;
    bool have_rydberg = false;
    while (std::getline(in, raw)) {
        ++line;
        std::string s = raw;
        if (auto hash = s.find('#'); hash != std::string::npos) s = s.substr(0, hash);
        s = strip(s);
        if (s.empty()) continue;

        const auto eq = s.find('=');
        if (eq == std::string::npos) throw ParseError("expected key = value", line);
        const std::string key = strip(s.substr(0, eq));
        const std::string value = strip(s.substr(eq + 1));
        const auto toks = split_ws(value);
        if (toks.empty()) throw ParseError("empty value for key " + key, line);

        try {
            if (key == "name") {
                m.name_ = value;
            } else if (key == "rydberg_constant_au") {
                m.rydberg_au_ = std::stod(toks[0]);
                have_rydberg = true;
            } else if (key == "core_charge") {
                m.core_charge_ = std::stoi(toks[0]);
            } else if (key == "alpha_c_au") {
                m.alpha_c_ = std::stod(toks[0]);
            } else if (key == "nuclear_spin") {
                m.nuclear_spin_ = parse_half_integer(toks[0], line);
            } else if (key == "defects.zero_for_missing") {
                m.zero_defects_for_missing_ = (toks[0] == "true" || toks[0] == "1");
            } else if (key.rfind("defect.", 0) == 0) {
                // defect.l<l>.j<j> = d0 d2 [d4 ...]
                const auto rest = key.substr(7);
                const auto dot = rest.find('.');
                if (dot == std::string::npos || rest[0] != 'l' || rest[dot + 1] != 'j')
                    throw ParseError("defect key must look like defect.l2.j2.5", line);
                const int l = std::stoi(rest.substr(1, dot - 1));
                const HalfInteger j = parse_half_integer(rest.substr(dot + 2), line);
                QuantumDefectSeries series;
                series.l = l;
                series.j = j;
                for (const auto& t : toks) series.coefficients.push_back(std::stod(t));
                if (!m.defects_.emplace(std::make_pair(l, j.twice()), std::move(series)).second)
                    throw ParseError("duplicate defect series for " + key, line);
            } else if (key.rfind("potential.l", 0) == 0) {
                // potential.l<l> = a1 a2 a3 a4 rc
                const int l = std::stoi(key.substr(11));
                if (toks.size() != 5)
                    throw ParseError("potential needs 5 values: a1 a2 a3 a4 rc", line);
                CorePotentialCoefficients c;
                c.a1 = std::stod(toks[0]);
                c.a2 = std::stod(toks[1]);
                c.a3 = std::stod(toks[2]);
                c.a4 = std::stod(toks[3]);
                c.r_c = std::stod(toks[4]);
                if (c.r_c <= 0) throw ParseError("cutoff radius r_c must be positive", line);
                if (!m.potentials_.emplace(l, c).second)
                    throw ParseError("duplicate potential for l=" + std::to_string(l), line);
            } else if (key.rfind("anchor.", 0) == 0) {
                // anchor.n5.l1.j1.5 = energy_au
                const auto rest = key.substr(7);
                int n = 0, l = 0;
                HalfInteger j;
                if (std::sscanf(rest.c_str(), "n%d.l%d.", &n, &l) != 2)
                    throw ParseError("anchor key must look like anchor.n5.l1.j1.5", line);
                const auto jpos = rest.find(".j");
                if (jpos == std::string::npos) throw ParseError("anchor key missing .j", line);
                j = parse_half_integer(rest.substr(jpos + 2), line);
                m.anchors_[{n, l, j.twice()}] = std::stod(toks[0]);
            } else {
                throw ParseError("unknown key in species file: " + key, line);
            }
        } catch (const ParseError&) {
            throw;
        } catch (const std::exception& e) {
            throw ParseError(std::string("bad value: ") + e.what(), line);
        }
    }

    if (!have_rydberg)
        throw ParseError("species file must set rydberg_constant_au: " + path);
    if (m.rydberg_au_ <= 0) throw ParseError("rydberg_constant_au must be positive");
    if (m.alpha_c_ < 0) throw ParseError("alpha_c_au must be non-negative");
    if (m.core_charge_ < 1) throw ParseError("core_charge must be >= 1");
    return m;
}

bool SpeciesModel::has_defect_series(int l, HalfInteger j) const {
    return zero_defects_for_missing_ || defects_.count({l, j.twice()}) > 0;
}

const QuantumDefectSeries& SpeciesModel::defect_series(int l, HalfInteger j) const {
    const auto it = defects_.find({l, j.twice()});
    if (it != defects_.end()) return it->second;
    if (zero_defects_for_missing_) {
        zero_series_.l = l;
        zero_series_.j = j;
        zero_series_.coefficients = {0.0};
        return zero_series_;
    }
    throw ConfigError("no quantum-defect series for l=" + std::to_string(l) +
                      " j=" + j.str() + " in species " + name_);
}

const CorePotentialCoefficients& SpeciesModel::potential_coefficients(int l) const {
    if (potentials_.empty())
        throw ConfigError("species " + name_ + " carries no model-potential coefficients");
    auto it = potentials_.find(l);
    if (it != potentials_.end()) return it->second;
    return potentials_.rbegin()->second;  // highest configured l covers the rest
}

std::optional<double> SpeciesModel::anchor_energy_au(const RydbergState& s) const {
    const auto it = anchors_.find({s.n, s.l, s.j.twice()});
    if (it == anchors_.end()) return std::nullopt;
    return it->second;
}

bool SpeciesModel::is_hydrogenic() const {
    for (const auto& [key, series] : defects_)
        for (double c : series.coefficients)
            if (c != 0.0) return false;
    return true;
}

double quantum_defect(const QuantumDefectSeries& series, int n) {
    if (series.coefficients.empty()) return 0.0;
    const double d0 = series.coefficients[0];
    const double base = n - d0;
    if (base <= 0)
        throw DomainError("quantum defect undefined: n - d0 = " + std::to_string(base));
    double delta = d0;
    double denom = 1.0;
    for (std::size_t k = 1; k < series.coefficients.size(); ++k) {
        denom *= base * base;
        delta += series.coefficients[k] / denom;
    }
    return delta;
}

double effective_n(const RydbergState& state, const SpeciesModel& species) {
    state.validate();
    if (!species.has_defect_series(state.l, state.j))
        throw ConfigError("no defect series for state " + state.str());
    const double delta = quantum_defect(species.defect_series(state.l, state.j), state.n);
    const double nstar = state.n - delta;
    if (nstar <= 0)
        throw DomainError("effective quantum number non-positive for " + state.str());
    return nstar;
}

double binding_energy(const RydbergState& state, const SpeciesModel& species) {
    const double nstar = effective_n(state, species);
    return -species.rydberg_constant_au() / (nstar * nstar);
}

double state_energy(const RydbergState& state, const SpeciesModel& species) {
    if (auto anchored = species.anchor_energy_au(state)) return *anchored;
    return binding_energy(state, species);
}

double potential(double r, int l, const SpeciesModel& species, ModelKind model) {
    if (r <= 0) throw DomainError("potential requires r > 0");
    const double centrifugal = 0.5 * l * (l + 1) / (r * r);
    switch (model) {
        case ModelKind::NCA:
            return -1.0 / r + centrifugal;
        case ModelKind::MMP: {
            const auto& c = species.potential_coefficients(l);
            const double z = species.core_charge();
            const double zl = 1.0 + (z - 1.0) * std::exp(-c.a1 * r) -
                              r * (c.a3 + c.a4 * r) * std::exp(-c.a2 * r);
            const double rr = r / c.r_c;
            const double r6 = std::pow(rr, 6);
            const double pol = -species.core_polarizability_au() / (2.0 * r * r * r * r) *
                               (1.0 - std::exp(-r6));
            return -zl / r + pol + centrifugal;
        }
        case ModelKind::External:
            throw ConfigError("external prediction tables carry no potential");
    }
    throw ConfigError("unknown model kind");
}

} // namespace rydat
