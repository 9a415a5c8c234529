#include "rydat/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <future>
#include <thread>

#include <nlohmann/json.hpp>

#include "rydat/digest.hpp"
#include "rydat/errors.hpp"
#include "rydat/trace_io.hpp"
#include "rydat/units.hpp"

namespace rydat {

namespace {

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

std::string power_label(double power_w) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%05.1fmW", power_w * 1e3);
    return buf;
}

ordered_json fit_to_json(const FitResult& f) {
    ordered_json j;
    j["omega_max_mhz"] = units::rads_to_mhz(f.omega_max);
    j["omega_max_err_mhz"] = units::rads_to_mhz(f.omega_max_err);
    j["gamma3_mhz"] = units::rads_to_mhz(f.gamma3);
    j["gamma3_err_mhz"] = units::rads_to_mhz(f.gamma3_err);
    j["delta_mhz"] = units::rads_to_mhz(f.delta_c);
    j["delta_err_mhz"] = units::rads_to_mhz(f.delta_c_err);
    j["amplitude"] = f.amplitude;
    j["amplitude_err"] = f.amplitude_err;
    j["baseline"] = f.baseline;
    j["baseline_err"] = f.baseline_err;
    j["chi2_reduced"] = f.chi2_reduced;
    j["converged"] = f.converged;
    j["degenerate_omega"] = f.degenerate_omega;
    j["iterations"] = f.iterations;
    ordered_json cov = ordered_json::array();
    for (int r = 0; r < f.covariance.rows(); ++r) {
        ordered_json row = ordered_json::array();
        for (int c = 0; c < f.covariance.cols(); ++c) row.push_back(f.covariance(r, c));
        cov.push_back(row);
    }
    j["covariance"] = cov;
    return j;
}

struct WrittenFiles {
    std::vector<std::string> relative;
    void add(const std::string& rel) { relative.push_back(rel); }
};

} // namespace

double model_reduced_element(const RydbergState& lower, const RydbergState& upper,
                             const SpeciesModel& species, const ModelTag& model) {
    const double reduced = reduced_dipole(lower, upper, species, model);
    return std::abs(reduced) / std::sqrt(double(lower.j.twice() + 1));
}

PipelineResult run_pipeline(const RunConfig& cfg, const std::string& out_dir) {
    PipelineResult result;
    result.out_dir = out_dir;

    if (cfg.n_list.empty()) {
        result.warnings.push_back("pipeline n list is empty; nothing to do");
        return result;
    }
    if (cfg.powers.empty()) throw ConfigError("pipeline.powers_mw is empty");

    const SpeciesModel species = SpeciesModel::load(cfg.species_path);

    std::vector<ExternalModelTable> external;
    external.reserve(cfg.model_table_paths.size());
    for (const auto& p : cfg.model_table_paths)
        external.push_back(load_external_model(p, fs::path(p).stem().string()));

    const HyperfineTransition transition{cfg.lower_state, cfg.upper_state(cfg.n_list.front()),
                                         cfg.polarization_q, species.nuclear_spin()};
    const double stretched = std::abs(stretched_hyperfine_factor(transition));
    if (stretched == 0.0) throw SelectionRuleError("configured transition is dipole-forbidden");

    // Γ held fixed during the AT fits: the natural width for the full forward
    // model, or the broadened effective width measured off a synthetic
    // coupling-free spectrum (the standard procedure) otherwise.
    AtFitConfig fit_cfg;
    fit_cfg.quadrature = cfg.quadrature;
    fit_cfg.gamma3_seed = cfg.gamma3_floor;
    if (cfg.fit_mode == "forward") {
        fit_cfg.mode = AtFitMode::InstrumentForward;
        fit_cfg.instrument = &cfg.instrument;
        fit_cfg.gamma_fixed = cfg.ladder.gamma;
    } else {
        fit_cfg.mode = AtFitMode::EffectiveWidth;
        if (cfg.gamma_effective > 0) {
            fit_cfg.gamma_fixed = cfg.gamma_effective;
        } else {
            const SpectrumTrace ideal = cross_section_trace(cfg.sweep_grid(), cfg.ladder, 0.0);
            fit_cfg.gamma_fixed =
                fit_two_level(apply_instrument(ideal, cfg.instrument), nullptr).gamma_eff;
        }
    }
    result.gamma_fit = fit_cfg.gamma_fixed;

    WrittenFiles written;
    const auto grid = cfg.sweep_grid();

    BeamGeometry analysis_beam;
    analysis_beam.w_maj = cfg.beam_w_maj + cfg.analysis_w_maj_offset;
    analysis_beam.w_min = cfg.beam_w_min + cfg.analysis_w_min_offset;
    analysis_beam.omega_max = 0.0;

    for (int n : cfg.n_list) {
        PerNResult per_n;
        per_n.n = n;
        try {
            const RydbergState upper = cfg.upper_state(n);
            double mu_true_cm = 0.0;
            if (cfg.spectra_dir.empty()) {
                const double reduced_nca =
                    model_reduced_element(cfg.lower_state, upper, species, ModelTag::nca());
                mu_true_cm = units::au_to_cm(stretched * reduced_nca);
            }

            struct Task {
                double power = 0.0;
                SpectrumTrace trace;
                std::string rel_path;
            };
            std::vector<Task> tasks;
            for (std::size_t ip = 0; ip < cfg.powers.size(); ++ip) {
                Task t;
                t.power = cfg.powers[ip];
                t.rel_path = "spectra/n" + std::to_string(n) + "_" + power_label(t.power) + ".tsv";
                if (cfg.spectra_dir.empty()) {
                    LadderSystem sys = cfg.ladder;
                    sys.gamma3 = cfg.true_gamma3;
                    sys.delta_c = 0.0;
                    const BeamGeometry beam =
                        make_beam(t.power, cfg.beam_w_maj, cfg.beam_w_min, mu_true_cm);
                    SpectrumTrace trace = simulate_spectrum(grid, sys, beam, cfg.cloud,
                                                            cfg.quadrature);
                    trace = apply_instrument(trace, cfg.instrument);
                    const std::uint64_t task_seed =
                        splitmix64(cfg.seed ^ (static_cast<std::uint64_t>(n) << 32 ^ ip));
                    t.trace = add_noise(trace, cfg.noise_rel, task_seed);
                    write_trace((fs::path(out_dir) / t.rel_path).string(), t.trace);
                    written.add(t.rel_path);
                } else {
                    t.trace = read_trace(
                        (fs::path(cfg.spectra_dir) / fs::path(t.rel_path).filename()).string());
                }
                tasks.push_back(std::move(t));
            }

            // independent fits fan out across powers when cores allow
            std::vector<FitResult> fits(tasks.size());
            auto run_fit = [&](std::size_t i) {
                return fit_at_spectrum(tasks[i].trace, cfg.ladder.sigma0, analysis_beam,
                                       cfg.cloud, fit_cfg);
            };
            if (std::thread::hardware_concurrency() > 1) {
                std::vector<std::future<FitResult>> futures;
                futures.reserve(tasks.size());
                for (std::size_t i = 0; i < tasks.size(); ++i)
                    futures.push_back(std::async(std::launch::async, run_fit, i));
                for (std::size_t i = 0; i < tasks.size(); ++i) fits[i] = futures[i].get();
            } else {
                for (std::size_t i = 0; i < tasks.size(); ++i) fits[i] = run_fit(i);
            }

            std::vector<PowerSeriesPoint> points;
            for (std::size_t i = 0; i < tasks.size(); ++i) {
                PowerPointRecord rec;
                rec.power_true = tasks[i].power;
                rec.power_analysis = tasks[i].power * cfg.analysis_power_scale;
                rec.fit = fits[i];
                rec.spectrum_file = tasks[i].rel_path;
                per_n.points.push_back(rec);
                points.push_back({rec.power_analysis, fits[i].omega_max, fits[i].omega_max_err});

                const std::string fit_rel =
                    "fits/n" + std::to_string(n) + "_" + power_label(tasks[i].power) + ".json";
                ordered_json j = fit_to_json(fits[i]);
                j["power_mw"] = tasks[i].power * 1e3;
                j["power_analysis_mw"] = rec.power_analysis * 1e3;
                write_file_atomic((fs::path(out_dir) / fit_rel).string(), j.dump(2) + "\n");
                written.add(fit_rel);
            }

            per_n.series = fit_power_series(points);
            per_n.estimate = dipole_from_gradient(
                per_n.series.gradient, per_n.series.gradient_err, analysis_beam.w_maj,
                cfg.waist_err, analysis_beam.w_min, cfg.waist_err, cfg.power_rel_err, n);
            HyperfineTransition tn = transition;
            tn.upper = cfg.upper_state(n);
            to_reduced(per_n.estimate, tn);
            per_n.ok = true;
        } catch (const Error& e) {
            per_n.ok = false;
            per_n.error = std::string(e.category()) + ": " + e.what();
            result.warnings.push_back("n=" + std::to_string(n) + " aborted (" + per_n.error + ")");
        }
        result.per_n.push_back(std::move(per_n));
    }

    // model tables over the successfully measured n values
    std::vector<DipoleEstimate> measured;
    for (const auto& pn : result.per_n)
        if (pn.ok) measured.push_back(pn.estimate);

    if (!measured.empty()) {
        const HalfInteger lower_j = cfg.lower_state.j;
        for (const char* name : {"NCA", "MMP"}) {
            const ModelTag tag =
                std::string(name) == "NCA" ? ModelTag::nca() : ModelTag::mmp();
            for (const auto& est : measured)
                result.model_tables[name][est.n] = model_reduced_element(
                    cfg.lower_state, cfg.upper_state(est.n), species, tag);
        }
        const double lower_norm = std::sqrt(double(lower_j.twice() + 1));
        for (const auto& table : external) {
            bool complete = true;
            for (const auto& est : measured) {
                const RydbergState upper = cfg.upper_state(est.n);
                if (!table.contains(cfg.lower_state, upper)) {
                    result.warnings.push_back("model table '" + table.name() +
                                              "' lacks n=" + std::to_string(est.n) +
                                              "; skipped from the comparison");
                    complete = false;
                    break;
                }
            }
            if (!complete) continue;
            const double angular = std::abs(reduced_j_factor(
                cfg.lower_state.l, cfg.lower_state.j, cfg.upper_l, cfg.upper_j));
            for (const auto& est : measured) {
                const RydbergState upper = cfg.upper_state(est.n);
                result.model_tables[table.name()][est.n] =
                    angular * std::abs(table.lookup(cfg.lower_state, upper)) / lower_norm;
            }
        }
        result.comparison = chi_squared_compare(measured, result.model_tables);
    }

    // results document
    {
        ordered_json doc;
        doc["gamma_fit_mhz"] = units::rads_to_mhz(result.gamma_fit);
        doc["fit_mode"] = cfg.fit_mode;
        ordered_json per_n = ordered_json::array();
        for (const auto& pn : result.per_n) {
            ordered_json j;
            j["n"] = pn.n;
            j["ok"] = pn.ok;
            if (!pn.ok) {
                j["error"] = pn.error;
            } else {
                j["gradient_rads_per_sqrtw"] = pn.series.gradient;
                j["gradient_err_rads_per_sqrtw"] = pn.series.gradient_err;
                j["intercept_mhz"] = units::rads_to_mhz(pn.series.intercept);
                j["intercept_err_mhz"] = units::rads_to_mhz(pn.series.intercept_err);
                j["intercept_zero_sigma"] = pn.series.intercept_zero_sigma;
                j["series_chi2_reduced"] = pn.series.chi2_reduced;
                j["mu_au"] = pn.estimate.mu_au;
                j["mu_err_au"] = pn.estimate.mu_err_au;
                j["mu_cm"] = pn.estimate.mu_cm;
                j["mu_err_cm"] = pn.estimate.mu_err_cm;
                j["reduced_au"] = pn.estimate.reduced_au;
                j["reduced_err_au"] = pn.estimate.reduced_err_au;
                ordered_json pts = ordered_json::array();
                for (const auto& rec : pn.points) {
                    ordered_json pj;
                    pj["power_mw"] = rec.power_true * 1e3;
                    pj["power_analysis_mw"] = rec.power_analysis * 1e3;
                    pj["omega_max_mhz"] = units::rads_to_mhz(rec.fit.omega_max);
                    pj["omega_max_err_mhz"] = units::rads_to_mhz(rec.fit.omega_max_err);
                    pj["spectrum_file"] = rec.spectrum_file;
                    pts.push_back(pj);
                }
                j["points"] = pts;
            }
            per_n.push_back(j);
        }
        doc["per_n"] = per_n;
        if (result.comparison) {
            ordered_json cmp = ordered_json::array();
            for (const auto& e : result.comparison->ranking) {
                ordered_json ce;
                ce["model"] = e.model;
                ce["chi2"] = e.chi2;
                cmp.push_back(ce);
            }
            doc["model_comparison"] = cmp;
        }
        ordered_json tables;
        for (const auto& [name, table] : result.model_tables) {
            ordered_json tj;
            for (const auto& [n, v] : table) tj[std::to_string(n)] = v;
            tables[name] = tj;
        }
        doc["model_tables_reduced_au"] = tables;
        doc["warnings"] = result.warnings;
        write_file_atomic((fs::path(out_dir) / "results.json").string(), doc.dump(2) + "\n");
        written.add("results.json");
    }

    for (const auto& rel : emit_plot_data(result, out_dir)) written.add(rel);

    // digest over this run's outputs, in a fixed order
    std::sort(written.relative.begin(), written.relative.end());
    std::uint64_t digest = fnv1a64("rydat-outputs-v1");
    for (const auto& rel : written.relative) {
        digest = fnv1a64(rel, digest);
        std::ifstream in(fs::path(out_dir) / rel, std::ios::binary);
        std::ostringstream buf;
        buf << in.rdbuf();
        digest = fnv1a64(buf.str(), digest);
    }
    result.outputs_digest = digest;
    result.written_files = written.relative;

    ledger_append(out_dir, "pipeline", fnv1a64(cfg.canonical_text), digest);
    return result;
}

std::vector<std::string> emit_plot_data(const PipelineResult& result,
                                        const std::string& out_dir) {
    std::vector<std::string> written;
    auto fmt = [](double v) {
        char buf[40];
        std::snprintf(buf, sizeof buf, "%.17g", v);
        return std::string(buf);
    };

    for (const auto& pn : result.per_n) {
        if (!pn.ok) continue;
        std::ostringstream out;
        out << "# rydat-plot omega-vs-sqrtp n=" << pn.n << "\n";
        out << "# columns = sqrtP_sqrtW omega_mhz sigma_omega_mhz\n";
        out << "# fit: gradient_rads_per_sqrtw = " << fmt(pn.series.gradient)
            << " +- " << fmt(pn.series.gradient_err) << "\n";
        out << "# fit: intercept_mhz = " << fmt(units::rads_to_mhz(pn.series.intercept))
            << " +- " << fmt(units::rads_to_mhz(pn.series.intercept_err)) << "\n";
        for (const auto& rec : pn.points)
            out << fmt(std::sqrt(rec.power_analysis)) << "\t"
                << fmt(units::rads_to_mhz(rec.fit.omega_max)) << "\t"
                << fmt(units::rads_to_mhz(rec.fit.omega_max_err)) << "\n";
        const std::string rel = "plots/omega_vs_sqrtp_n" + std::to_string(pn.n) + ".tsv";
        write_file_atomic((std::filesystem::path(out_dir) / rel).string(), out.str());
        written.push_back(rel);
    }

    {
        std::ostringstream out;
        out << "# rydat-plot reduced-vs-n\n";
        out << "# columns = n reduced_au sigma_au";
        for (const auto& [name, table] : result.model_tables) out << " " << name;
        out << "\n";
        for (const auto& pn : result.per_n) {
            if (!pn.ok) continue;
            out << pn.n << "\t" << fmt(pn.estimate.reduced_au) << "\t"
                << fmt(pn.estimate.reduced_err_au);
            for (const auto& [name, table] : result.model_tables) {
                const auto it = table.find(pn.n);
                out << "\t" << (it != table.end() ? fmt(it->second) : "nan");
            }
            out << "\n";
        }
        const std::string rel = "plots/reduced_vs_n.tsv";
        write_file_atomic((std::filesystem::path(out_dir) / rel).string(), out.str());
        written.push_back(rel);
    }
    return written;
}

void ledger_append(const std::string& out_dir, const std::string& command,
                   std::uint64_t config_hash, std::uint64_t outputs_digest) {
    namespace fs = std::filesystem;
    fs::create_directories(out_dir);
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    char stamp[32];
    std::strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));

    std::ofstream out(fs::path(out_dir) / "ledger.tsv", std::ios::app);
    if (!out) throw IoError("cannot append to ledger in " + out_dir);
    out << stamp << "\t" << hex64(config_hash) << "\t" << command << "\t"
        << hex64(outputs_digest) << "\n";
}

} // namespace rydat
