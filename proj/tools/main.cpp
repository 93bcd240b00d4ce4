#include <CLI11.hpp>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "ss2f/config.hpp"
#include "ss2f/csv.hpp"
#include "ss2f/estimate.hpp"
#include "ss2f/io.hpp"
#include "ss2f/kalman.hpp"
#include "ss2f/simulate.hpp"

namespace fs = std::filesystem;
using namespace ss2f;

namespace {

struct CliFlags {
    std::optional<std::string> config;
    ConfigOverrides overrides;
    std::string panel_file;  // filter/estimate input
    std::string theta_file;  // filter input
};

void add_common(CLI::App* cmd, CliFlags& flags) {
    cmd->add_option("--config", flags.config, "JSON config file; flags override its values");
    cmd->add_option("--seed", flags.overrides.seed, "RNG seed");
    cmd->add_option("--out-dir", flags.overrides.out_dir, "output directory");
    cmd->add_option("--nt", flags.overrides.n_t, "number of observation dates");
    cmd->add_option("--contracts", flags.overrides.contracts, "number of futures contracts");
    cmd->add_option("--dt", flags.overrides.dt, "observation step width in years");
    cmd->add_option("--threads", flags.overrides.threads,
                    "worker threads (0 = hardware concurrency)");
}

ObservationPanel load_panel(const fs::path& file) {
    try {
        return io::read_panel_csv(file);
    } catch (const std::exception& e) {
        throw ConfigError(e.what());
    }
}

ParamVector load_theta(const fs::path& file) {
    try {
        return io::read_theta_json(file);
    } catch (const std::exception& e) {
        throw ConfigError(e.what());
    }
}

fs::path panel_path(const CliFlags& flags, const RunConfig& cfg) {
    return flags.panel_file.empty() ? fs::path(cfg.out_dir) / "panel.csv"
                                    : fs::path(flags.panel_file);
}

int cmd_simulate(const RunConfig& cfg) {
    StatePath path;
    ObservationPanel panel;
    try {
        std::tie(path, panel) = simulate_panel(cfg.theta, cfg.sim_config(), cfg.rng_seed());
    } catch (const std::runtime_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    const fs::path out(cfg.out_dir);
    io::write_states_csv(path, out / "states.csv");
    io::write_panel_csv(panel, out / "panel.csv");
    io::write_meta_json(cfg.theta, cfg.sim_config(), cfg.rng_seed(), out / "meta.json");
    return 0;
}

int cmd_filter(const RunConfig& cfg, const CliFlags& flags) {
    const ObservationPanel panel = load_panel(panel_path(flags, cfg));
    const ParamVector theta =
        flags.theta_file.empty() ? cfg.theta : load_theta(flags.theta_file);

    FilterOutput out;
    try {
        out = kf_run(theta, panel, cfg.dt);
    } catch (const FilterError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    io::write_filter_csv(out, fs::path(cfg.out_dir) / "filter_output.csv");
    std::cout << "NLL = " << csv::format(out.nll()) << '\n';
    return 0;
}

int cmd_estimate(const RunConfig& cfg, const CliFlags& flags) {
    const ObservationPanel panel = load_panel(panel_path(flags, cfg));

    EstimationResult est;
    FilterOutput filt;
    try {
        std::tie(est, filt) = estimate_full(panel, cfg.box, cfg.dt, cfg.optim, cfg.threads);
    } catch (const std::runtime_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }

    const fs::path out(cfg.out_dir);
    const long n_t = static_cast<long>(panel.dates());
    io::write_estimate_json(est, out / "estimate.json");
    io::write_filter_csv(filt, out / "filter_output.csv");
    io::write_results_table_csv({{n_t, est.theta_hat, est.nll}}, out / "results_table.csv");
    io::write_initial_values_csv({{n_t, est.theta0, 0.0}}, out / "initial_values.csv");
    std::cout << "NLL = " << csv::format(est.nll) << '\n';
    return 0;
}

int cmd_experiment(const RunConfig& cfg) {
    const std::vector<StudyRun> runs = convergence_study(
        cfg.theta, cfg.sizes, cfg.replications, cfg.rng_seed(), cfg.study_options());

    const fs::path out(cfg.out_dir);
    io::write_errors_csv(runs, cfg.theta, out / "errors.csv");

    // One headline row per sample size: the first successful replication.
    std::vector<io::ResultRow> table;
    for (std::size_t i = 0; i < cfg.sizes.size(); ++i) {
        for (int r = 0; r < cfg.replications; ++r) {
            const StudyRun& run = runs[i * static_cast<std::size_t>(cfg.replications) +
                                       static_cast<std::size_t>(r)];
            if (run.ok) {
                table.push_back({run.n_t, run.theta_hat, run.nll});
                break;
            }
        }
    }
    io::write_results_table_csv(table, out / "table1.csv");

    // Band data from a dedicated simulation filtered at the true theta,
    // on a stream past everything the study consumed.
    const auto used =
        3 * cfg.sizes.size() * static_cast<std::size_t>(cfg.replications);
    int band_result = 0;
    try {
        const auto [path, panel] =
            simulate_panel(cfg.theta, cfg.sim_config(), cfg.rng_seed().offset(used));
        const FilterOutput filt = kf_run(cfg.theta, panel, cfg.dt);
        io::write_bands_csv(path, state_confidence_band(filt, 0.95), out / "bands.csv");
    } catch (const std::runtime_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        band_result = 2;
    }

    std::size_t ok = 0;
    for (const auto& run : runs) ok += run.ok ? 1 : 0;
    std::cout << "experiment: " << runs.size() << " runs, " << ok << " ok\n";
    return band_result;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Schwartz-Smith two-factor commodity futures model: simulation, filtering, "
                 "estimation and the convergence experiment"};
    app.require_subcommand(1);

    CliFlags flags;
    CLI::App* sim = app.add_subcommand(
        "simulate", "simulate a latent state path and its futures price panel");
    add_common(sim, flags);
    CLI::App* filt = app.add_subcommand(
        "filter", "run the Kalman filter over a panel at a fixed parameter vector");
    add_common(filt, flags);
    filt->add_option("--panel", flags.panel_file, "panel CSV (default <out-dir>/panel.csv)");
    filt->add_option("--theta", flags.theta_file,
                     "parameter JSON (default: the config's theta)");
    CLI::App* est = app.add_subcommand(
        "estimate", "grid search plus simplex maximum likelihood on a panel");
    add_common(est, flags);
    est->add_option("--panel", flags.panel_file, "panel CSV (default <out-dir>/panel.csv)");
    CLI::App* exp = app.add_subcommand(
        "experiment", "replicated simulate-and-estimate study across sample sizes");
    add_common(exp, flags);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    try {
        std::optional<fs::path> config_file;
        if (flags.config) config_file = fs::path(*flags.config);
        const RunConfig cfg = load_run_config(config_file, flags.overrides);
        fs::create_directories(cfg.out_dir);

        if (sim->parsed()) return cmd_simulate(cfg);
        if (filt->parsed()) return cmd_filter(cfg, flags);
        if (est->parsed()) return cmd_estimate(cfg, flags);
        if (exp->parsed()) return cmd_experiment(cfg);
        return 1;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 1;
    } catch (const FilterError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
