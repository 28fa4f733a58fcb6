// comb-sense: command-line front end for two-tooth comb thermometry.
//
// Exit codes: 0 success, 1 oracle mismatch, 2 usage / config / input error.

#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "combsense/errors.hpp"
#include "combsense/parallel.hpp"
#include "commands.hpp"
#include "run_config.hpp"

namespace {

using namespace combsense;
using namespace combsense::cli;

constexpr int exit_usage = 2;

struct GlobalOptions {
    std::string config;
    std::string out;
    std::optional<std::uint64_t> seed;
    std::optional<int> threads;
    std::string regime;
};

int thread_setting(const GlobalOptions& g)
{
    if (g.threads) {
        return *g.threads;
    }
    if (const char* env = std::getenv("COMB_SENSE_THREADS"); env && *env) {
        try {
            std::size_t used = 0;
            const int n = std::stoi(env, &used);
            if (used == std::string(env).size() && n >= 0) {
                return n;
            }
        } catch (const std::exception&) {
        }
        throw InputError(std::string("COMB_SENSE_THREADS must be a non-negative integer, got '") + env + "'");
    }
    return 0;
}

RunConfig effective_config(const GlobalOptions& g)
{
    RunConfig cfg = g.config.empty() ? RunConfig{} : load_run_config(g.config);
    if (!g.out.empty()) {
        cfg.output_dir = g.out;
    }
    if (g.seed) {
        cfg.oracle.seed = *g.seed;
    }
    if (!g.regime.empty()) {
        cfg.regime = g.regime == "exact" ? Regime::exact : Regime::weak;
    }
    return cfg;
}

int finish(const std::string& command, const RunConfig& cfg, const std::string& started,
           CommandResult result)
{
    nlohmann::ordered_json manifest;
    manifest["tool"] = "comb-sense";
    manifest["version"] = std::string(tool_version);
    manifest["command"] = command;
    manifest["config_hash"] = config_hash(cfg);
    manifest["seed"] = cfg.oracle.seed;
    manifest["started_utc"] = started;
    manifest["finished_utc"] = utc_timestamp();
    manifest["config"] = to_json(cfg);
    manifest["config"].erase("output_dir");  // not part of the result
    result.outputs.commit(cfg.output_dir, std::move(manifest));
    for (const auto& w : result.warnings) {
        std::cerr << "comb-sense: warning: " << w << '\n';
    }
    std::cerr << "comb-sense: " << command << ": wrote " << result.outputs.files().size() + 1
              << " file(s) to " << cfg.output_dir << '\n';
    return result.exit_code;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Two-tooth bosonic comb thermometry: QFI maps, figure data, spectrum reconstruction"};
    app.set_version_flag("--version", std::string(tool_version));
    app.require_subcommand(1);
    app.fallthrough();

    GlobalOptions g;
    app.add_option("--config", g.config, "RunConfig JSON file")->check(CLI::ExistingFile);
    app.add_option("--out", g.out, "Output directory (overrides output_dir)");
    app.add_option("--seed", g.seed, "Oracle seed (overrides oracle.seed)");
    app.add_option("--threads", g.threads, "Worker threads; 0 = runtime default (env COMB_SENSE_THREADS)")
        ->check(CLI::NonNegativeNumber);
    app.add_option("--regime", g.regime, "Coherence regime")->check(CLI::IsMember({"weak", "exact"}));

    auto* nbar = app.add_subcommand("nbar", "Thermal occupation and its derivatives over the T grid");
    auto* qfi = app.add_subcommand("qfi-map", "Memory-efficiency matrices over the (T, delta) grid");
    auto* cut = app.add_subcommand("advantage-cut", "A(delta) at fixed temperatures");
    std::vector<double> cut_temps;
    cut->add_option("--temps", cut_temps, "Temperatures in mK (default: cut_temperatures_mk)")
        ->delimiter(',');

    auto* rec = app.add_subcommand("reconstruct", "Kernel and noise spectrum from a measured delay sweep");
    std::string rec_input;
    std::string rec_meta;
    std::string rec_probe;
    bool rec_debias = false;
    rec->add_option("--input", rec_input, "Sweep CSV (delay_tau0,visibility)");
    rec->add_option("--meta", rec_meta, "Sweep metadata JSON (default: sidecar next to the input)");
    rec->add_option("--probe-curve", rec_probe, "Probe-only sweep CSV for calibration");
    rec->add_flag("--debias", rec_debias, "Remove the linear probe-dephasing bias");

    auto* oracle = app.add_subcommand("oracle", "Monte-Carlo validation of the analytic forms");
    auto* repro = app.add_subcommand("reproduce", "Emit the data behind figure 2 or 3");
    std::string figure;
    repro->add_option("figure", figure, "fig2 or fig3")->required()->check(CLI::IsMember({"fig2", "fig3"}));
    auto* show = app.add_subcommand("show-config", "Print the effective configuration");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return exit_usage;
    }

    try {
        const std::string started = utc_timestamp();
        RunConfig cfg = effective_config(g);
        if (!rec_input.empty()) {
            cfg.reconstruct.input = rec_input;
        }
        if (!rec_meta.empty()) {
            cfg.reconstruct.meta = rec_meta;
        }
        if (!rec_probe.empty()) {
            cfg.reconstruct.probe_curve = rec_probe;
        }
        if (rec_debias) {
            cfg.reconstruct.debias = true;
        }
        if (cfg.reconstruct.debias && !cfg.reconstruct.probe_curve.empty()) {
            throw InputError("choose either a probe curve or --debias, not both");
        }
        parallel::set_thread_count(thread_setting(g));

        if (*show) {
            std::cout << to_json(cfg).dump(2) << '\n';
            return 0;
        }
        if (*nbar) {
            return finish("nbar", cfg, started, cmd_nbar(cfg));
        }
        if (*qfi) {
            return finish("qfi-map", cfg, started, cmd_qfi_map(cfg));
        }
        if (*cut) {
            return finish("advantage-cut", cfg, started, cmd_advantage_cut(cfg, cut_temps));
        }
        if (*rec) {
            return finish("reconstruct", cfg, started, cmd_reconstruct(cfg));
        }
        if (*oracle) {
            return finish("oracle", cfg, started, cmd_oracle(cfg));
        }
        if (*repro) {
            return figure == "fig2" ? finish("reproduce fig2", cfg, started, cmd_reproduce_fig2(cfg))
                                    : finish("reproduce fig3", cfg, started, cmd_reproduce_fig3(cfg));
        }
    } catch (const ParseError& e) {
        std::cerr << "comb-sense: config error";
        if (e.line() > 0) {
            std::cerr << " at " << g.config << ":" << e.line();
        }
        std::cerr << ": " << e.what() << '\n';
        return exit_usage;
    } catch (const InputError& e) {
        std::cerr << "comb-sense: input error: " << e.what() << '\n';
        return exit_usage;
    } catch (const DomainError& e) {
        std::cerr << "comb-sense: invalid parameters: " << e.what() << '\n';
        return exit_usage;
    } catch (const std::exception& e) {
        std::cerr << "comb-sense: error: " << e.what() << '\n';
        return exit_usage;
    }
    return exit_usage;
}
