#include "commands.hpp"

#include <cmath>
#include <filesystem>
#include <numbers>
#include <sstream>

#include "combsense/csv.hpp"
#include "combsense/errors.hpp"
#include "combsense/grids.hpp"
#include "combsense/metrology.hpp"
#include "combsense/oracle.hpp"
#include "combsense/spectroscopy.hpp"
#include "combsense/sweep_io.hpp"

namespace combsense::cli {

namespace fs = std::filesystem;
using csv::format_number;

namespace {

MapSpec map_spec(const RunConfig& cfg)
{
    return MapSpec{cfg.comb_at(0.0), cfg.absorber, cfg.kernel, cfg.regime};
}

template <class Field>
std::string matrix_csv(const EfficiencyMap& map, std::string_view title, Field field)
{
    std::ostringstream out;
    out << "# " << title << "\n# rows: temperature in mK; columns: delay in tau0\n";
    out << "T_mK\\delta_tau0";
    for (double d : map.delays) {
        out << ',' << format_number(d);
    }
    out << '\n';
    for (std::size_t ti = 0; ti < map.temperatures.size(); ++ti) {
        out << format_number(1.0e3 * map.temperatures[ti]);
        for (std::size_t di = 0; di < map.delays.size(); ++di) {
            out << ',' << format_number(field(map.at(ti, di)));
        }
        out << '\n';
    }
    return out.str();
}

std::optional<double> tau_c_of(const KernelModel& kernel, double temperature)
{
    if (const auto* m = std::get_if<kernel_forms::LorentzianCrossover>(&kernel)) {
        return correlation_time(m->ct_model, temperature);
    }
    if (const auto* m = std::get_if<kernel_forms::LorentzianFixed>(&kernel)) {
        return m->tau_c;
    }
    return std::nullopt;
}

std::string minima_csv(const EfficiencyMap& map, const KernelModel& kernel)
{
    const auto minima = advantage_minima(map);
    const bool with_tau = tau_c_of(kernel, map.temperatures.front()).has_value();
    std::ostringstream out;
    out << "# delay minimizing the memory advantage A at each temperature\n";
    out << "T_mK,delta_min_tau0,advantage_min" << (with_tau ? ",tau_c_tau0" : "") << '\n';
    for (const auto& m : minima) {
        out << format_number(1.0e3 * m.temperature) << ',' << format_number(m.delta) << ','
            << format_number(m.advantage);
        if (with_tau) {
            out << ',' << format_number(*tau_c_of(kernel, m.temperature));
        }
        out << '\n';
    }
    return out.str();
}

std::string f2_full_csv(const RunConfig& cfg, const EfficiencyMap& map)
{
    const ProbeDephasing probe{cfg.probe_gamma};
    EfficiencyMap full = map;
    const auto n_t = static_cast<std::ptrdiff_t>(map.temperatures.size());
    const auto n_d = static_cast<std::ptrdiff_t>(map.delays.size());
#pragma omp parallel for collapse(2) schedule(static)
    for (std::ptrdiff_t ti = 0; ti < n_t; ++ti) {
        for (std::ptrdiff_t di = 0; di < n_d; ++di) {
            auto& cell = full.cells[static_cast<std::size_t>(ti * n_d + di)];
            try {
                cell.f2 = qfi_two_full(cfg.comb_at(map.delays[di]), map.temperatures[ti], cfg.absorber,
                                       cfg.kernel, probe, cfg.regime);
            } catch (const std::exception&) {
                cell.f2 = std::nan("");
            }
        }
    }
    return matrix_csv(full, "two-tooth QFI with probe dephasing F2_full, 1/K^2",
                      [](const QfiBreakdown& q) { return q.f2; });
}

std::string cut_csv(const EfficiencyMap& map, std::string_view title, double QfiBreakdown::*field)
{
    std::ostringstream out;
    out << "# " << title << "\ndelta_tau0";
    for (double t : map.temperatures) {
        out << ",A_" << format_number(1.0e3 * t) << "mK";
    }
    out << '\n';
    for (std::size_t di = 0; di < map.delays.size(); ++di) {
        out << format_number(map.delays[di]);
        for (std::size_t ti = 0; ti < map.temperatures.size(); ++ti) {
            out << ',' << format_number(map.at(ti, di).*field);
        }
        out << '\n';
    }
    return out.str();
}

EfficiencyMap cut_map(const RunConfig& cfg, const std::vector<double>& temps_mk)
{
    if (temps_mk.empty()) {
        throw InputError("no cut temperatures given");
    }
    std::vector<double> temps;
    for (double t : temps_mk) {
        if (!(t > 0.0) || !std::isfinite(t)) {
            throw InputError("cut temperatures must be positive (mK)");
        }
        temps.push_back(1.0e-3 * t);
    }
    return efficiency_map(map_spec(cfg), temps, cfg.delays());
}

double k_of(const QfiBreakdown& q) { return q.k_tilde; }
double one_plus_k_of(const QfiBreakdown& q) { return q.variance_gain; }
double s_kernel_of(const QfiBreakdown& q) { return q.s_kernel; }
double f2_of(const QfiBreakdown& q) { return q.f2; }
double a_of(const QfiBreakdown& q) { return q.advantage; }
double a_weak_of(const QfiBreakdown& q) { return q.advantage_weak_limit; }
double a_approx_of(const QfiBreakdown& q) { return q.advantage_approx; }

constexpr std::string_view k_title = "normalized kernel Ktilde(delta, T)";
constexpr std::string_view one_plus_k_title = "variance gain 1 + Ktilde";
constexpr std::string_view s_kernel_title = "relative kernel responsivity dKtilde/dT / (1 + Ktilde), 1/K";
constexpr std::string_view f2_title = "two-tooth QFI F2, 1/K^2";
constexpr std::string_view a_title = "memory advantage A = F2 / (F1(1) + F1(2))";
constexpr std::string_view a_weak_title = "memory advantage, leading order in the dephasing exponent";
constexpr std::string_view a_approx_title = "factorized advantage (1 + Ktilde)(1 + S_K / S_n)^2";

std::string read_input(const fs::path& path, std::string_view what)
{
    if (!fs::is_regular_file(path)) {
        throw InputError(std::string(what) + " not found: " + path.string());
    }
    return csv::read_file(path);
}

std::string located(const fs::path& path, const ParseError& e)
{
    const std::string what = e.what();
    if (e.line() == 0 || what.rfind("line ", 0) == 0) {
        return path.string() + ": " + what;
    }
    return path.string() + ": line " + std::to_string(e.line()) + ": " + what;
}

DelaySweep load_checked(const fs::path& csv_path, const fs::path& meta_path, std::string_view what)
{
    const std::string text = read_input(csv_path, what);
    const std::string meta = read_input(meta_path, "sweep metadata");
    try {
        (void)parse_sweep_meta(meta);
    } catch (const ParseError& e) {
        throw InputError(located(meta_path, e));
    }
    try {
        return parse_sweep(text, meta);
    } catch (const ParseError& e) {
        throw InputError(located(csv_path, e));
    } catch (const InsufficientDataError& e) {
        throw InputError(csv_path.string() + ": " + e.what());
    } catch (const DomainError& e) {
        throw InputError(csv_path.string() + ": " + e.what());
    }
}

} // namespace

CommandResult cmd_nbar(const RunConfig& cfg)
{
    std::ostringstream out;
    out << "# thermal occupation of the absorber at f_a = "
        << format_number(cfg.absorber.omega_a / PhysicalConstants::two_pi) << " Hz\n";
    out << "T_mK,n_bar,dn_bar_dT_exact_per_K,dn_bar_dT_low_t_per_K,variance\n";
    for (double t : cfg.temperatures_kelvin()) {
        const double n = thermal_occupation(cfg.absorber, t);
        out << format_number(1.0e3 * t) << ',' << format_number(n) << ','
            << format_number(occupation_derivative(cfg.absorber, t, DerivativeMode::exact)) << ','
            << format_number(occupation_derivative(cfg.absorber, t, DerivativeMode::low_t_approx)) << ','
            << format_number(occupation_variance(n, cfg.absorber.variance_mode)) << '\n';
    }
    CommandResult r;
    r.outputs.add("nbar.csv", out.str());
    return r;
}

CommandResult cmd_qfi_map(const RunConfig& cfg)
{
    const auto map = efficiency_map(map_spec(cfg), cfg.temperatures_kelvin(), cfg.delays());
    CommandResult r;
    r.outputs.add("k_tilde.csv", matrix_csv(map, k_title, k_of));
    r.outputs.add("one_plus_k_tilde.csv", matrix_csv(map, one_plus_k_title, one_plus_k_of));
    r.outputs.add("relative_responsivity.csv", matrix_csv(map, s_kernel_title, s_kernel_of));
    r.outputs.add("f2.csv", matrix_csv(map, f2_title, f2_of));
    r.outputs.add("advantage.csv", matrix_csv(map, a_title, a_of));
    r.outputs.add("advantage_weak_limit.csv", matrix_csv(map, a_weak_title, a_weak_of));
    r.outputs.add("advantage_approx.csv", matrix_csv(map, a_approx_title, a_approx_of));
    r.outputs.add("delta_min.csv", minima_csv(map, cfg.kernel));
    if (cfg.probe_gamma > 0.0) {
        r.outputs.add("f2_full.csv", f2_full_csv(cfg, map));
    }
    return r;
}

CommandResult cmd_advantage_cut(const RunConfig& cfg, const std::vector<double>& temps_mk)
{
    const auto map = cut_map(cfg, temps_mk.empty() ? cfg.cut_temperatures_mk : temps_mk);
    CommandResult r;
    r.outputs.add("advantage_cut.csv", cut_csv(map, a_title, &QfiBreakdown::advantage));
    r.outputs.add("advantage_cut_weak_limit.csv",
                  cut_csv(map, a_weak_title, &QfiBreakdown::advantage_weak_limit));
    return r;
}

CommandResult cmd_reconstruct(const RunConfig& cfg)
{
    const auto& opt = cfg.reconstruct;
    if (opt.input.empty()) {
        throw InputError("reconstruct needs an input sweep (--input or reconstruct.input)");
    }
    const fs::path input = opt.input;
    const fs::path meta = opt.meta.empty() ? sidecar_path(input) : fs::path(opt.meta);
    DelaySweep sweep = load_checked(input, meta, "input sweep");
    if (!opt.probe_curve.empty()) {
        const auto probe = load_checked(opt.probe_curve, meta, "probe curve");
        try {
            sweep = calibrate_probe(sweep, probe, opt.calibration_floor);
        } catch (const DomainError& e) {
            throw InputError(std::string("probe curve: ") + e.what());
        }
    }
    KernelEstimate est = invert_visibility(sweep, opt.baseline);
    if (opt.debias) {
        if (!sweep.meta.probe_gamma) {
            throw InputError("debias requested but the sweep metadata has no probe_gamma");
        }
        est = debias_linear(est, *sweep.meta.probe_gamma);
    }
    SpectrumEstimate spec;
    try {
        spec = cosine_transform(est, cfg.omegas());
        if (opt.normalize) {
            spec = normalize_spectrum(spec);
        }
    } catch (const InsufficientDataError& e) {
        throw InputError(std::string("too few usable points for a spectrum: ") + e.what());
    }

    CommandResult r;
    r.outputs.add("kernel.csv", kernel_csv(est));
    r.outputs.add("spectrum.csv", spectrum_csv(spec));
    if (const auto flagged = est.flagged_count(); flagged > 0) {
        r.warnings.push_back(std::to_string(flagged) + " delay point(s) flagged and excluded");
    }
    if (spec.negative_count > 0) {
        r.warnings.push_back(std::to_string(spec.negative_count) +
                             " negative spectral value(s) retained (truncation ringing)");
    }
    return r;
}

CommandResult cmd_oracle(const RunConfig& cfg)
{
    const auto results = run_validation(default_validation_matrix(), cfg.absorber, cfg.oracle,
                                        cfg.tolerance_sigma, cfg.analytic_perturbation_sigma);
    std::size_t passed = 0;
    std::size_t failed = 0;
    std::size_t skipped = 0;
    auto records = nlohmann::ordered_json::array();
    for (const auto& c : results) {
        const char* status = c.skipped ? "skipped" : (c.passed ? "pass" : "fail");
        (c.skipped ? skipped : (c.passed ? passed : failed))++;
        nlohmann::ordered_json rec;
        rec["label"] = c.label;
        rec["quantity"] = c.quantity;
        rec["status"] = status;
        rec["parameters"] = {{"kernel", c.kernel},
                             {"temperature_mk", 1.0e3 * c.temperature},
                             {"delta_tau0", c.delta}};
        rec["seed"] = c.seed;
        rec["n_samples"] = c.estimate.n_samples;
        if (c.skipped) {
            rec["analytic"] = nullptr;
            rec["estimate"] = nullptr;
            rec["std_error"] = nullptr;
            rec["z_score"] = nullptr;
        } else {
            rec["analytic"] = c.analytic;
            rec["estimate"] = c.estimate.mean;
            rec["std_error"] = c.estimate.std_error;
            rec["z_score"] = c.z_score;
        }
        rec["reason"] = c.reason;
        records.push_back(std::move(rec));
    }
    nlohmann::ordered_json report;
    report["n_samples"] = cfg.oracle.n_samples;
    report["seed"] = cfg.oracle.seed;
    report["tolerance_sigma"] = cfg.tolerance_sigma;
    report["analytic_perturbation_sigma"] = cfg.analytic_perturbation_sigma;
    report["summary"] = {{"total", results.size()}, {"passed", passed}, {"failed", failed}, {"skipped", skipped}};
    report["all_passed"] = failed == 0;
    report["comparisons"] = std::move(records);

    CommandResult r;
    r.outputs.add("oracle_report.json", report.dump(2) + "\n");
    if (failed > 0) {
        r.exit_code = 1;
        r.warnings.push_back(std::to_string(failed) + " oracle comparison(s) outside " +
                             format_number(cfg.tolerance_sigma) + " standard errors");
    }
    return r;
}

CommandResult cmd_reproduce_fig2(const RunConfig& cfg)
{
    const auto map = efficiency_map(map_spec(cfg), cfg.temperatures_kelvin(), cfg.delays());
    const auto cuts = cut_map(cfg, cfg.cut_temperatures_mk);
    CommandResult r;
    r.outputs.add("fig2a_k_tilde.csv", matrix_csv(map, k_title, k_of));
    r.outputs.add("fig2b_one_plus_k_tilde.csv", matrix_csv(map, one_plus_k_title, one_plus_k_of));
    r.outputs.add("fig2c_relative_responsivity.csv", matrix_csv(map, s_kernel_title, s_kernel_of));
    r.outputs.add("fig2d_f2.csv", matrix_csv(map, f2_title, f2_of));
    r.outputs.add("fig2e_advantage.csv", matrix_csv(map, a_title, a_of));
    r.outputs.add("fig2e_minima.csv", minima_csv(map, cfg.kernel));
    r.outputs.add("fig2f_advantage_cuts.csv", cut_csv(cuts, a_title, &QfiBreakdown::advantage));
    return r;
}

CommandResult cmd_reproduce_fig3(const RunConfig& cfg)
{
    const auto& o = cfg.fig3;
    const auto delays = log_grid(o.delay_tau0.min, o.delay_tau0.max, o.delay_tau0.count);
    const auto omegas = cfg.omegas();
    struct Trace {
        std::string name;
        KernelModel kernel;
    };
    const std::vector<Trace> traces{
        {"white", kernel_forms::GaussianWhite{o.white_sigma_w}},
        {"lorentzian", kernel_forms::LorentzianFixed{o.lorentzian_tau_c}},
        {"one_over_f", kernel_forms::OneOverF{o.one_over_f_tau_f, o.one_over_f_alpha}},
    };
    const double c_inf = std::exp(-o.meta.alpha_sq * o.meta.baseline_exponent());

    CommandResult r;
    std::vector<std::vector<double>> coherence;
    std::vector<SpectrumEstimate> spectra;
    for (const auto& t : traces) {
        std::vector<double> k(delays.size());
        for (std::size_t i = 0; i < delays.size(); ++i) {
            k[i] = normalized_kernel(t.kernel, delays[i], 0.030);
        }
        const auto sweep = synthesize_sweep(delays, k, o.meta);
        std::vector<double> c(delays.size());
        for (std::size_t i = 0; i < delays.size(); ++i) {
            c[i] = sweep.visibility[i] / c_inf;
        }
        coherence.push_back(std::move(c));
        spectra.push_back(normalize_spectrum(cosine_transform(invert_visibility(sweep), omegas)));
        r.outputs.add("sweeps/fig3_" + t.name + ".csv", sweep_csv(sweep));
        r.outputs.add("sweeps/fig3_" + t.name + ".json", sweep_meta_json(sweep.meta) + "\n");
    }

    std::ostringstream a;
    a << "# normalized two-tooth coherence C2(delta) / C2(infinity)\n";
    a << "delta_tau0,white,lorentzian,one_over_f\n";
    for (std::size_t i = 0; i < delays.size(); ++i) {
        a << format_number(delays[i]);
        for (const auto& c : coherence) {
            a << ',' << format_number(c[i]);
        }
        a << '\n';
    }
    std::ostringstream b;
    b << "# reconstructed noise spectra, each scaled to unit maximum\n";
    b << "f_cycles_per_tau0,omega_rad_per_tau0,white,lorentzian,one_over_f\n";
    for (std::size_t i = 0; i < omegas.size(); ++i) {
        b << format_number(omegas[i] / (2.0 * std::numbers::pi)) << ',' << format_number(omegas[i]);
        for (const auto& s : spectra) {
            b << ',' << format_number(s.s_nn[i]);
        }
        b << '\n';
    }
    r.outputs.add("fig3a_normalized_coherence.csv", a.str());
    r.outputs.add("fig3b_normalized_spectra.csv", b.str());
    return r;
}

} // namespace combsense::cli
