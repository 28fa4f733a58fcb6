#include "run_config.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numbers>
#include <set>

#include "combsense/csv.hpp"
#include "combsense/errors.hpp"
#include "combsense/grids.hpp"
#include "combsense/sweep_io.hpp"

namespace combsense::cli {

using nlohmann::json;
using nlohmann::ordered_json;

CombConfig RunConfig::comb_at(double delta) const
{
    if (g) {
        return CombConfig::from_coupling(*g, delta, comb.alpha_sq, tooth_duration);
    }
    return comb.with_delay(delta);
}

namespace {

std::vector<double> expand(const GridRange& r, bool logarithmic)
{
    return logarithmic ? log_grid(r.min, r.max, r.count) : linear_grid(r.min, r.max, r.count);
}

} // namespace

std::vector<double> RunConfig::temperatures_kelvin() const
{
    auto t = expand(temperature_mk, false);
    for (double& v : t) {
        v *= 1.0e-3;
    }
    return t;
}

std::vector<double> RunConfig::delays() const
{
    return expand(delay_tau0, true);
}

std::vector<double> RunConfig::omegas() const
{
    auto w = expand(frequency_cycles, true);
    for (double& v : w) {
        v *= 2.0 * std::numbers::pi;
    }
    return w;
}

namespace {

using Path = std::vector<std::string>;

std::string join(const Path& path)
{
    std::string out;
    for (const auto& p : path) {
        out += out.empty() ? p : "." + p;
    }
    return out.empty() ? "(root)" : out;
}

class Reader {
public:
    explicit Reader(std::string_view text) : text_(text) {}

    // Best-effort line of a key path: each component is searched for as a
    // quoted key after the previous one.
    std::size_t line_of(const Path& path) const
    {
        std::size_t pos = 0;
        for (const auto& key : path) {
            const auto found = text_.find("\"" + key + "\"", pos);
            if (found == std::string_view::npos) {
                return pos == 0 ? 0 : line_of_offset(text_, pos);
            }
            pos = found;
        }
        return path.empty() ? 1 : line_of_offset(text_, pos);
    }

    [[noreturn]] void fail(const Path& path, const std::string& message) const
    {
        throw ParseError(join(path) + ": " + message, line_of(path));
    }

    void allow_keys(const json& obj, const Path& path, const std::set<std::string>& allowed) const
    {
        if (!obj.is_object()) {
            fail(path, "expected an object");
        }
        for (const auto& item : obj.items()) {
            if (!allowed.contains(item.key())) {
                Path at = path;
                at.push_back(item.key());
                fail(at, "unknown key");
            }
        }
    }

    const json* child(const json& obj, const std::string& key) const
    {
        const auto it = obj.find(key);
        return it == obj.end() ? nullptr : &*it;
    }

    double number(const json& obj, const Path& path, const std::string& key, double fallback,
                  const std::function<bool(double)>& ok, const char* requirement) const
    {
        const json* v = child(obj, key);
        if (!v) {
            return fallback;
        }
        Path at = path;
        at.push_back(key);
        if (!v->is_number()) {
            fail(at, "expected a number");
        }
        const double x = v->get<double>();
        if (!std::isfinite(x) || !ok(x)) {
            fail(at, std::string("must be ") + requirement);
        }
        return x;
    }

    double positive(const json& obj, const Path& path, const std::string& key, double fallback) const
    {
        return number(obj, path, key, fallback, [](double x) { return x > 0.0; }, "positive");
    }

    double non_negative(const json& obj, const Path& path, const std::string& key, double fallback) const
    {
        return number(obj, path, key, fallback, [](double x) { return x >= 0.0; }, "non-negative");
    }

    std::uint64_t count(const json& obj, const Path& path, const std::string& key,
                        std::uint64_t fallback, std::uint64_t minimum) const
    {
        const json* v = child(obj, key);
        if (!v) {
            return fallback;
        }
        Path at = path;
        at.push_back(key);
        if (!v->is_number_unsigned() && !(v->is_number_integer() && v->get<std::int64_t>() >= 0)) {
            fail(at, "expected a non-negative integer");
        }
        const auto x = v->get<std::uint64_t>();
        if (x < minimum) {
            fail(at, "must be at least " + std::to_string(minimum));
        }
        return x;
    }

    bool boolean(const json& obj, const Path& path, const std::string& key, bool fallback) const
    {
        const json* v = child(obj, key);
        if (!v) {
            return fallback;
        }
        if (!v->is_boolean()) {
            Path at = path;
            at.push_back(key);
            fail(at, "expected true or false");
        }
        return v->get<bool>();
    }

    std::string string(const json& obj, const Path& path, const std::string& key,
                       const std::string& fallback) const
    {
        const json* v = child(obj, key);
        if (!v || v->is_null()) {
            return fallback;
        }
        if (!v->is_string()) {
            Path at = path;
            at.push_back(key);
            fail(at, "expected a string");
        }
        return v->get<std::string>();
    }

    std::string choice(const json& obj, const Path& path, const std::string& key,
                       const std::string& fallback, const std::set<std::string>& options) const
    {
        const auto s = string(obj, path, key, fallback);
        if (!options.contains(s)) {
            Path at = path;
            at.push_back(key);
            std::string list;
            for (const auto& o : options) {
                list += list.empty() ? o : ", " + o;
            }
            fail(at, "must be one of: " + list);
        }
        return s;
    }

    GridRange grid(const json& obj, const Path& path, const std::string& key, GridRange fallback) const
    {
        const json* v = child(obj, key);
        if (!v) {
            return fallback;
        }
        Path at = path;
        at.push_back(key);
        allow_keys(*v, at, {"min", "max", "count"});
        GridRange r;
        r.min = positive(*v, at, "min", fallback.min);
        r.max = positive(*v, at, "max", fallback.max);
        r.count = count(*v, at, "count", fallback.count, 1);
        if (r.max < r.min) {
            fail(at, "max must not be below min");
        }
        if (r.count == 1 && r.max != r.min) {
            fail(at, "a single-point grid needs min == max");
        }
        if (r.count > 1 && r.max == r.min) {
            fail(at, "degenerate grid: min == max with more than one point");
        }
        return r;
    }

private:
    std::string_view text_;
};

template <class F>
void guarded(const Reader& rd, const Path& path, F&& f)
{
    try {
        f();
    } catch (const DomainError& e) {
        rd.fail(path, e.what());
    }
}

void read_absorber(const Reader& rd, const json& root, RunConfig& cfg)
{
    const json* a = rd.child(root, "absorber");
    if (!a) {
        return;
    }
    const Path p{"absorber"};
    rd.allow_keys(*a, p, {"frequency_hz", "variance_mode", "derivative_mode"});
    const double f = rd.positive(*a, p, "frequency_hz", cfg.absorber.omega_a / PhysicalConstants::two_pi);
    const auto vm = rd.choice(*a, p, "variance_mode", "approximate", {"approximate", "exact"});
    cfg.absorber = AbsorberParams::from_frequency_hz(
        f, vm == "exact" ? VarianceMode::exact : VarianceMode::approximate);
    const auto dm = rd.choice(*a, p, "derivative_mode", "exact", {"exact", "low_t_approx"});
    cfg.derivative_mode = dm == "exact" ? DerivativeMode::exact : DerivativeMode::low_t_approx;
}

void read_comb(const Reader& rd, const json& root, RunConfig& cfg)
{
    const json* c = rd.child(root, "comb");
    if (!c) {
        return;
    }
    const Path p{"comb"};
    rd.allow_keys(*c, p, {"g", "lambda", "tau1", "tau2", "alpha_sq", "tooth_duration"});
    const bool explicit_teeth = rd.child(*c, "lambda") || rd.child(*c, "tau1") || rd.child(*c, "tau2");
    if (explicit_teeth && rd.child(*c, "g")) {
        rd.fail(p, "give either g or lambda/tau1/tau2, not both");
    }
    cfg.comb.alpha_sq = rd.positive(*c, p, "alpha_sq", 1.0);
    if (explicit_teeth) {
        cfg.g.reset();
        cfg.comb.lambda = rd.non_negative(*c, p, "lambda", cfg.comb.lambda);
        cfg.comb.tau1 = rd.positive(*c, p, "tau1", cfg.comb.tau1);
        cfg.comb.tau2 = rd.positive(*c, p, "tau2", cfg.comb.tau2);
        if (rd.child(*c, "tooth_duration")) {
            rd.fail({"comb", "tooth_duration"}, "only meaningful together with g");
        }
    } else {
        cfg.g = rd.positive(*c, p, "g", *cfg.g);
        cfg.tooth_duration = rd.positive(*c, p, "tooth_duration", cfg.tooth_duration);
    }
}

void read_kernel(const Reader& rd, const json& root, RunConfig& cfg)
{
    const json* k = rd.child(root, "kernel");
    if (!k) {
        return;
    }
    const Path p{"kernel"};
    if (!k->is_object()) {
        rd.fail(p, "expected an object");
    }
    const auto model = rd.choice(*k, p, "model", "lorentzian_crossover",
                                 {"lorentzian_crossover", "lorentzian_fixed", "gaussian_white",
                                  "one_over_f", "tabulated"});
    using namespace kernel_forms;
    if (model == "lorentzian_crossover") {
        rd.allow_keys(*k, p, {"model", "tau_max", "tau_min", "t_c_mk", "gamma"});
        CorrelationTimeModel m;
        m.tau_max = rd.positive(*k, p, "tau_max", m.tau_max);
        m.tau_min = rd.positive(*k, p, "tau_min", m.tau_min);
        m.t_c = 1.0e-3 * rd.positive(*k, p, "t_c_mk", 1.0e3 * m.t_c);
        m.gamma = rd.positive(*k, p, "gamma", m.gamma);
        cfg.kernel = LorentzianCrossover{m};
    } else if (model == "lorentzian_fixed") {
        rd.allow_keys(*k, p, {"model", "tau_c"});
        cfg.kernel = LorentzianFixed{rd.positive(*k, p, "tau_c", 10.0)};
    } else if (model == "gaussian_white") {
        rd.allow_keys(*k, p, {"model", "sigma_w"});
        cfg.kernel = GaussianWhite{rd.positive(*k, p, "sigma_w", 1.0e-3)};
    } else if (model == "one_over_f") {
        rd.allow_keys(*k, p, {"model", "tau_f", "alpha"});
        cfg.kernel = OneOverF{rd.positive(*k, p, "tau_f", 0.1), rd.positive(*k, p, "alpha", 0.6)};
    } else {
        rd.allow_keys(*k, p, {"model", "table"});
        cfg.kernel_table = rd.string(*k, p, "table", "");
        if (cfg.kernel_table.empty()) {
            rd.fail(p, "tabulated model needs 'table' (path to a delay,value CSV)");
        }
        try {
            cfg.kernel = load_tabulated_kernel(cfg.kernel_table);
        } catch (const ParseError& e) {
            rd.fail({"kernel", "table"}, cfg.kernel_table + " line " + std::to_string(e.line()) + ": " + e.what());
        } catch (const std::exception& e) {
            rd.fail({"kernel", "table"}, e.what());
        }
    }
    guarded(rd, p, [&] { validate(cfg.kernel); });
}

void read_grids(const Reader& rd, const json& root, RunConfig& cfg)
{
    const json* g = rd.child(root, "grids");
    if (!g) {
        return;
    }
    const Path p{"grids"};
    rd.allow_keys(*g, p, {"temperature_mk", "delay_tau0", "frequency_cycles_per_tau0"});
    cfg.temperature_mk = rd.grid(*g, p, "temperature_mk", cfg.temperature_mk);
    cfg.delay_tau0 = rd.grid(*g, p, "delay_tau0", cfg.delay_tau0);
    cfg.frequency_cycles = rd.grid(*g, p, "frequency_cycles_per_tau0", cfg.frequency_cycles);
}

void read_cuts(const Reader& rd, const json& root, RunConfig& cfg)
{
    const json* c = rd.child(root, "cut_temperatures_mk");
    if (!c) {
        return;
    }
    const Path p{"cut_temperatures_mk"};
    if (!c->is_array() || c->empty()) {
        rd.fail(p, "expected a non-empty array of temperatures");
    }
    cfg.cut_temperatures_mk.clear();
    for (const auto& v : *c) {
        if (!v.is_number() || !(v.get<double>() > 0.0)) {
            rd.fail(p, "temperatures must be positive numbers");
        }
        cfg.cut_temperatures_mk.push_back(v.get<double>());
    }
}

void read_oracle(const Reader& rd, const json& root, RunConfig& cfg)
{
    const json* o = rd.child(root, "oracle");
    if (!o) {
        return;
    }
    const Path p{"oracle"};
    rd.allow_keys(*o, p, {"n_samples", "seed", "regime_guard", "tolerance_sigma",
                          "analytic_perturbation_sigma"});
    cfg.oracle.n_samples = rd.count(*o, p, "n_samples", cfg.oracle.n_samples, 1000);
    cfg.oracle.seed = rd.count(*o, p, "seed", cfg.oracle.seed, 0);
    cfg.oracle.regime_guard = rd.positive(*o, p, "regime_guard", cfg.oracle.regime_guard);
    cfg.tolerance_sigma = rd.positive(*o, p, "tolerance_sigma", cfg.tolerance_sigma);
    cfg.analytic_perturbation_sigma = rd.number(
        *o, p, "analytic_perturbation_sigma", 0.0, [](double) { return true; }, "finite");
}

void read_reconstruct(const Reader& rd, const json& root, RunConfig& cfg)
{
    const json* r = rd.child(root, "reconstruct");
    if (!r) {
        return;
    }
    const Path p{"reconstruct"};
    rd.allow_keys(*r, p, {"input", "meta", "probe_curve", "debias", "baseline", "normalize",
                          "calibration_floor"});
    auto& opt = cfg.reconstruct;
    opt.input = rd.string(*r, p, "input", opt.input);
    opt.meta = rd.string(*r, p, "meta", opt.meta);
    opt.probe_curve = rd.string(*r, p, "probe_curve", opt.probe_curve);
    opt.debias = rd.boolean(*r, p, "debias", opt.debias);
    opt.normalize = rd.boolean(*r, p, "normalize", opt.normalize);
    opt.baseline = rd.choice(*r, p, "baseline", "analytic", {"analytic", "asymptote"}) == "asymptote"
                       ? Baseline::asymptote
                       : Baseline::analytic;
    opt.calibration_floor = rd.positive(*r, p, "calibration_floor", opt.calibration_floor);
    if (opt.debias && !opt.probe_curve.empty()) {
        rd.fail(p, "choose either probe_curve calibration or debias, not both");
    }
}

void read_fig3(const Reader& rd, const json& root, RunConfig& cfg)
{
    const json* f = rd.child(root, "fig3");
    if (!f) {
        return;
    }
    const Path p{"fig3"};
    rd.allow_keys(*f, p, {"lambda", "tau1", "tau2", "alpha_sq", "variance", "delay_tau0",
                          "white_sigma_w", "lorentzian_tau_c", "one_over_f_tau_f",
                          "one_over_f_alpha"});
    auto& o = cfg.fig3;
    o.meta.lambda = rd.positive(*f, p, "lambda", o.meta.lambda);
    o.meta.tau1 = rd.positive(*f, p, "tau1", o.meta.tau1);
    o.meta.tau2 = rd.positive(*f, p, "tau2", o.meta.tau2);
    o.meta.alpha_sq = rd.positive(*f, p, "alpha_sq", o.meta.alpha_sq);
    o.meta.variance = rd.positive(*f, p, "variance", o.meta.variance);
    o.delay_tau0 = rd.grid(*f, p, "delay_tau0", o.delay_tau0);
    o.white_sigma_w = rd.positive(*f, p, "white_sigma_w", o.white_sigma_w);
    o.lorentzian_tau_c = rd.positive(*f, p, "lorentzian_tau_c", o.lorentzian_tau_c);
    o.one_over_f_tau_f = rd.positive(*f, p, "one_over_f_tau_f", o.one_over_f_tau_f);
    o.one_over_f_alpha = rd.positive(*f, p, "one_over_f_alpha", o.one_over_f_alpha);
    guarded(rd, p, [&] { validate(KernelModel{kernel_forms::OneOverF{o.one_over_f_tau_f, o.one_over_f_alpha}}); });
}

} // namespace

RunConfig parse_run_config(std::string_view text)
{
    json root;
    try {
        root = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("malformed JSON: ") + e.what(), line_of_offset(text, e.byte));
    }
    const Reader rd(text);
    rd.allow_keys(root, {}, {"$schema", "absorber", "comb", "kernel", "grids", "cut_temperatures_mk",
                             "regime", "probe", "oracle", "reconstruct", "fig3", "tau0_seconds",
                             "output_dir"});
    RunConfig cfg;
    read_absorber(rd, root, cfg);
    read_comb(rd, root, cfg);
    read_kernel(rd, root, cfg);
    read_grids(rd, root, cfg);
    read_cuts(rd, root, cfg);
    cfg.regime = rd.choice(root, {}, "regime", "weak", {"weak", "exact"}) == "exact" ? Regime::exact
                                                                                     : Regime::weak;
    if (const json* pr = rd.child(root, "probe")) {
        rd.allow_keys(*pr, {"probe"}, {"gamma_p"});
        cfg.probe_gamma = rd.non_negative(*pr, {"probe"}, "gamma_p", 0.0);
    }
    read_oracle(rd, root, cfg);
    read_reconstruct(rd, root, cfg);
    read_fig3(rd, root, cfg);
    cfg.tau0_seconds = rd.positive(root, {}, "tau0_seconds", cfg.tau0_seconds);
    cfg.output_dir = rd.string(root, {}, "output_dir", cfg.output_dir);
    if (cfg.output_dir.empty()) {
        rd.fail({"output_dir"}, "must not be empty");
    }
    if (cfg.g) {
        guarded(rd, {"comb"}, [&] { (void)cfg.comb_at(0.0); });
    } else {
        guarded(rd, {"comb"}, [&] { cfg.comb.with_delay(0.0).validate(); });
    }
    return cfg;
}

RunConfig load_run_config(const std::string& path)
{
    std::string text;
    try {
        text = csv::read_file(path);
    } catch (const std::exception& e) {
        throw ParseError(e.what(), 0);
    }
    return parse_run_config(text);
}

namespace {

ordered_json grid_json(const GridRange& r)
{
    return ordered_json{{"min", r.min}, {"max", r.max}, {"count", r.count}};
}

ordered_json kernel_json(const RunConfig& cfg)
{
    using namespace kernel_forms;
    ordered_json k;
    k["model"] = std::string(kernel_name(cfg.kernel));
    if (const auto* m = std::get_if<LorentzianCrossover>(&cfg.kernel)) {
        k["tau_max"] = m->ct_model.tau_max;
        k["tau_min"] = m->ct_model.tau_min;
        k["t_c_mk"] = 1.0e3 * m->ct_model.t_c;
        k["gamma"] = m->ct_model.gamma;
    } else if (const auto* m = std::get_if<LorentzianFixed>(&cfg.kernel)) {
        k["tau_c"] = m->tau_c;
    } else if (const auto* m = std::get_if<GaussianWhite>(&cfg.kernel)) {
        k["sigma_w"] = m->sigma_w;
    } else if (const auto* m = std::get_if<OneOverF>(&cfg.kernel)) {
        k["tau_f"] = m->tau_f;
        k["alpha"] = m->alpha;
    } else {
        k["table"] = cfg.kernel_table;
    }
    return k;
}

} // namespace

ordered_json to_json(const RunConfig& cfg)
{
    ordered_json j;
    j["absorber"] = {
        {"frequency_hz", cfg.absorber.omega_a / PhysicalConstants::two_pi},
        {"variance_mode", cfg.absorber.variance_mode == VarianceMode::exact ? "exact" : "approximate"},
        {"derivative_mode", cfg.derivative_mode == DerivativeMode::exact ? "exact" : "low_t_approx"},
    };
    if (cfg.g) {
        j["comb"] = {{"g", *cfg.g}, {"alpha_sq", cfg.comb.alpha_sq}, {"tooth_duration", cfg.tooth_duration}};
    } else {
        j["comb"] = {{"lambda", cfg.comb.lambda}, {"tau1", cfg.comb.tau1}, {"tau2", cfg.comb.tau2},
                     {"alpha_sq", cfg.comb.alpha_sq}};
    }
    j["kernel"] = kernel_json(cfg);
    j["grids"] = {
        {"temperature_mk", grid_json(cfg.temperature_mk)},
        {"delay_tau0", grid_json(cfg.delay_tau0)},
        {"frequency_cycles_per_tau0", grid_json(cfg.frequency_cycles)},
    };
    j["cut_temperatures_mk"] = cfg.cut_temperatures_mk;
    j["regime"] = cfg.regime == Regime::exact ? "exact" : "weak";
    j["probe"] = {{"gamma_p", cfg.probe_gamma}};
    j["oracle"] = {
        {"n_samples", cfg.oracle.n_samples},
        {"seed", cfg.oracle.seed},
        {"regime_guard", cfg.oracle.regime_guard},
        {"tolerance_sigma", cfg.tolerance_sigma},
        {"analytic_perturbation_sigma", cfg.analytic_perturbation_sigma},
    };
    const auto& r = cfg.reconstruct;
    j["reconstruct"] = {
        {"input", r.input},
        {"meta", r.meta},
        {"probe_curve", r.probe_curve},
        {"debias", r.debias},
        {"baseline", r.baseline == Baseline::asymptote ? "asymptote" : "analytic"},
        {"normalize", r.normalize},
        {"calibration_floor", r.calibration_floor},
    };
    const auto& f = cfg.fig3;
    j["fig3"] = {
        {"lambda", f.meta.lambda},
        {"tau1", f.meta.tau1},
        {"tau2", f.meta.tau2},
        {"alpha_sq", f.meta.alpha_sq},
        {"variance", f.meta.variance},
        {"delay_tau0", grid_json(f.delay_tau0)},
        {"white_sigma_w", f.white_sigma_w},
        {"lorentzian_tau_c", f.lorentzian_tau_c},
        {"one_over_f_tau_f", f.one_over_f_tau_f},
        {"one_over_f_alpha", f.one_over_f_alpha},
    };
    j["tau0_seconds"] = cfg.tau0_seconds;
    j["output_dir"] = cfg.output_dir;
    return j;
}

std::string config_hash(const RunConfig& cfg)
{
    auto j = to_json(cfg);
    j.erase("output_dir");  // where results land does not change them
    const std::string canonical = json::parse(j.dump()).dump();
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : canonical) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

} // namespace combsense::cli
