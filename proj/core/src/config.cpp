#include "rydat/config.hpp"

#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "rydat/errors.hpp"
#include "rydat/units.hpp"

namespace rydat {

namespace {

std::string strip(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

HalfInteger parse_half(const std::string& tok) {
    if (auto slash = tok.find('/'); slash != std::string::npos)
        return HalfInteger::from_twice(std::stoi(tok.substr(0, slash)));
    const double v = std::stod(tok);
    const double tw = 2.0 * v;
    if (std::abs(tw - std::round(tw)) > 1e-9)
        throw ConfigError("not an integer or half-integer: " + tok);
    return HalfInteger::from_twice(static_cast<int>(std::round(tw)));
}

class ConfigReader {
public:
    explicit ConfigReader(std::map<std::string, std::string> kv) : kv_(std::move(kv)) {}

    bool has(const std::string& key) const { return kv_.count(key) > 0; }

    std::string str(const std::string& key) {
        const auto it = kv_.find(key);
        if (it == kv_.end()) throw ConfigError("missing required config key: " + key);
        consumed_.insert(key);
        return it->second;
    }
    std::string str_or(const std::string& key, const std::string& fallback) {
        return has(key) ? str(key) : fallback;
    }
    double num(const std::string& key) {
        const std::string v = str(key);
        try {
            std::size_t pos = 0;
            const double d = std::stod(v, &pos);
            if (strip(v.substr(pos)) != "")
                throw ConfigError("trailing content in value of " + key + ": " + v);
            return d;
        } catch (const ConfigError&) {
            throw;
        } catch (const std::exception&) {
            throw ConfigError("not a number for key " + key + ": " + v);
        }
    }
    double num_or(const std::string& key, double fallback) {
        return has(key) ? num(key) : fallback;
    }
    long integer(const std::string& key) {
        const double d = num(key);
        if (d != std::floor(d)) throw ConfigError("expected an integer for key " + key);
        return static_cast<long>(d);
    }
    long integer_or(const std::string& key, long fallback) {
        return has(key) ? integer(key) : fallback;
    }
    std::vector<double> num_list(const std::string& key) {
        std::istringstream iss(str(key));
        std::vector<double> out;
        double v;
        while (iss >> v) out.push_back(v);
        if (!iss.eof()) throw ConfigError("malformed number list for key " + key);
        return out;
    }
    std::vector<std::string> str_list(const std::string& key) {
        std::istringstream iss(str(key));
        std::vector<std::string> out;
        std::string t;
        while (iss >> t) out.push_back(t);
        return out;
    }

    void reject_unknown() const {
        std::string unknown;
        for (const auto& [k, v] : kv_)
            if (!consumed_.count(k)) unknown += (unknown.empty() ? "" : ", ") + k;
        if (!unknown.empty()) throw ConfigError("unknown config keys: " + unknown);
    }

private:
    std::map<std::string, std::string> kv_;
    std::set<std::string> consumed_;
};

} // namespace

std::map<std::string, std::string> parse_key_value_file(const std::string& path,
                                                        std::string* canonical_text) {
    std::ifstream in(path);
    if (!in) throw FileNotFoundError(path);

    std::map<std::string, std::string> kv;
    std::string raw;
    long line = 0;
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
        if (key.empty()) throw ParseError("empty key", line);
        if (!kv.emplace(key, value).second)
            throw ParseError("duplicate config key: " + key, line);
    }
    if (canonical_text) {
        std::ostringstream oss;
        for (const auto& [k, v] : kv) oss << k << " = " << v << "\n";
        *canonical_text = oss.str();
    }
    return kv;
}

RunConfig RunConfig::load(const std::string& path) {
    RunConfig cfg;
    ConfigReader r(parse_key_value_file(path, &cfg.canonical_text));
    cfg.base_dir = std::filesystem::path(path).parent_path().string();

    auto resolve = [&](const std::string& p) {
        if (p.empty() || std::filesystem::path(p).is_absolute() || cfg.base_dir.empty())
            return p;
        return (std::filesystem::path(cfg.base_dir) / p).string();
    };

    cfg.species_path = resolve(r.str("species.file"));

    cfg.ladder.gamma = units::mhz_to_rads(r.num("ladder.gamma_mhz"));
    cfg.ladder.sigma0 = r.num("ladder.sigma0_m2");
    cfg.ladder.i_sat = r.num_or("ladder.i_sat_w_per_m2", 0.0);
    cfg.gamma3_floor = units::mhz_to_rads(r.num_or("ladder.gamma3_floor_mhz", 2.5));
    cfg.ladder.validate();

    cfg.beam_w_maj = units::um_to_m(r.num("beam.w_maj_um"));
    cfg.beam_w_min = units::um_to_m(r.num("beam.w_min_um"));

    cfg.cloud.n0 = units::percm3_to_perm3(r.num("cloud.n0_percm3"));
    cfg.cloud.s_x = units::um_to_m(r.num("cloud.s_x_um"));
    cfg.cloud.s_y = units::um_to_m(r.num("cloud.s_y_um"));
    cfg.cloud.s_z = units::um_to_m(r.num("cloud.s_z_um"));
    cfg.cloud.atom_number = r.num_or("cloud.atom_number", 0.0);
    cfg.cloud.validate();

    cfg.instrument.sweep_span = units::mhz_to_rads(r.num("instrument.sweep_span_mhz"));
    cfg.instrument.sweep_time = 1e-3 * r.num("instrument.sweep_time_ms");
    cfg.instrument.corner_hz = 1e3 * r.num("instrument.corner_khz");
    cfg.instrument.linewidth_hz = 1e3 * r.num("instrument.linewidth_khz");
    const std::string dir = r.str_or("instrument.direction", "up");
    if (dir == "up")
        cfg.instrument.direction = SweepDirection::Up;
    else if (dir == "down")
        cfg.instrument.direction = SweepDirection::Down;
    else
        throw ConfigError("instrument.direction must be 'up' or 'down'");
    cfg.instrument.validate();

    cfg.sweep_center = units::mhz_to_rads(r.num_or("sweep.center_mhz", 0.0));
    cfg.sweep_half_span = units::mhz_to_rads(r.num_or("sweep.half_span_mhz", 150.0));
    cfg.sweep_points = static_cast<int>(r.integer_or("sweep.points", 600));

    cfg.quadrature.nx = static_cast<int>(r.integer_or("quadrature.nx", 48));
    cfg.quadrature.ny = static_cast<int>(r.integer_or("quadrature.ny", 48));
    cfg.quadrature.validate();

    cfg.fit_mode = r.str_or("fit.mode", "forward");
    if (cfg.fit_mode != "forward" && cfg.fit_mode != "effective")
        throw ConfigError("fit.mode must be 'forward' or 'effective'");
    cfg.gamma_effective = units::mhz_to_rads(r.num_or("fit.gamma_effective_mhz", 0.0));

    {
        const auto lower = r.num_list("transition.lower_nlj");
        if (lower.size() != 3) throw ConfigError("transition.lower_nlj needs: n l j");
        const auto hf = r.num_list("transition.lower_fmf");
        if (hf.size() != 2) throw ConfigError("transition.lower_fmf needs: F m_F");
        cfg.lower_state =
            RydbergState(static_cast<int>(lower[0]), static_cast<int>(lower[1]),
                         parse_half(std::to_string(lower[2])),
                         parse_half(std::to_string(hf[0])), parse_half(std::to_string(hf[1])));
        cfg.upper_l = static_cast<int>(r.integer("transition.upper_l"));
        cfg.upper_j = parse_half(r.str("transition.upper_j"));
        const auto uhf = r.num_list("transition.upper_fmf");
        if (uhf.size() != 2) throw ConfigError("transition.upper_fmf needs: F m_F");
        cfg.upper_F = parse_half(std::to_string(uhf[0]));
        cfg.upper_mF = parse_half(std::to_string(uhf[1]));
        cfg.polarization_q = static_cast<int>(r.integer_or("transition.q", 1));
    }

    if (r.has("sim.omega_max_mhz"))
        cfg.sim_omega_max = units::mhz_to_rads(r.num("sim.omega_max_mhz"));
    if (r.has("sim.n")) cfg.sim_n = static_cast<int>(r.integer("sim.n"));
    cfg.sim_power = units::mw_to_w(r.num_or("sim.power_mw", 0.0));
    cfg.sim_gamma3 = units::mhz_to_rads(r.num_or("sim.gamma3_mhz", 2.5));
    cfg.sim_delta = units::mhz_to_rads(r.num_or("sim.delta_mhz", 0.0));
    cfg.sim_noise_rel = r.num_or("sim.noise_rel", 0.0);
    cfg.sim_instrumented = r.str_or("sim.instrumented", "true") == "true";

    if (r.has("pipeline.n_list")) {
        for (double v : r.num_list("pipeline.n_list")) cfg.n_list.push_back(static_cast<int>(v));
        for (double p : r.num_list("pipeline.powers_mw")) cfg.powers.push_back(units::mw_to_w(p));
        cfg.noise_rel = r.num_or("pipeline.noise_rel", 0.0);
        cfg.seed = static_cast<std::uint64_t>(r.integer_or("pipeline.seed", 0));
        cfg.true_gamma3 = units::mhz_to_rads(r.num_or("pipeline.true_gamma3_mhz", 2.5));
        cfg.analysis_w_maj_offset =
            units::um_to_m(r.num_or("pipeline.analysis_w_maj_offset_um", 0.0));
        cfg.analysis_w_min_offset =
            units::um_to_m(r.num_or("pipeline.analysis_w_min_offset_um", 0.0));
        cfg.analysis_power_scale = r.num_or("pipeline.analysis_power_scale", 1.0);
        cfg.waist_err = units::um_to_m(r.num_or("pipeline.waist_err_um", 10.0));
        cfg.power_rel_err = r.num_or("pipeline.power_rel_err", 0.05);
        if (r.has("pipeline.model_tables"))
            for (const auto& p : r.str_list("pipeline.model_tables"))
                cfg.model_table_paths.push_back(resolve(p));
        cfg.spectra_dir = resolve(r.str_or("pipeline.spectra_dir", ""));
    }

    r.reject_unknown();
    return cfg;
}

RydbergState RunConfig::upper_state(int n) const {
    return RydbergState(n, upper_l, upper_j, upper_F, upper_mF);
}

std::vector<double> RunConfig::sweep_grid() const {
    return make_sweep_grid(sweep_center, sweep_half_span, sweep_points);
}

} // namespace rydat
