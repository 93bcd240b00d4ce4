#include "ss2f/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <json.hpp>

namespace ss2f {

namespace {

using nlohmann::json;

void reject_unknown(const json& j, std::initializer_list<const char*> keys,
                    const std::string& origin) {
    if (!j.is_object()) throw ConfigError(origin + ": expected a JSON object");
    for (const auto& item : j.items()) {
        const bool known = std::any_of(keys.begin(), keys.end(), [&](const char* k) {
            return item.key() == k;
        });
        if (!known) throw ConfigError(origin + ": unknown key '" + item.key() + "'");
    }
}

template <typename T>
void take(const json& j, const char* key, T& out, const std::string& origin) {
    if (!j.contains(key)) return;
    try {
        j.at(key).get_to(out);
    } catch (const json::exception& e) {
        throw ConfigError(origin + ": key '" + key + "': " + e.what());
    }
}

template <typename T>
T required(const json& j, const char* key, const std::string& origin) {
    if (!j.contains(key)) throw ConfigError(origin + ": missing key '" + key + "'");
    T out{};
    take(j, key, out, origin);
    return out;
}

ParamVector parse_theta(const json& j, const std::string& origin) {
    reject_unknown(j,
                   {"kappa", "gamma", "mu_xi", "sigma_chi", "sigma_xi", "rho", "lambda_chi",
                    "lambda_xi", "s"},
                   origin);
    ParamVector p;
    p.kappa = required<double>(j, "kappa", origin);
    p.gamma = required<double>(j, "gamma", origin);
    p.mu_xi = required<double>(j, "mu_xi", origin);
    p.sigma_chi = required<double>(j, "sigma_chi", origin);
    p.sigma_xi = required<double>(j, "sigma_xi", origin);
    p.rho = required<double>(j, "rho", origin);
    p.lambda_chi = required<double>(j, "lambda_chi", origin);
    p.lambda_xi = required<double>(j, "lambda_xi", origin);
    p.s = required<std::vector<double>>(j, "s", origin);
    return p;
}

void parse_dim(const json& j, GridDim& dim, const std::string& origin) {
    reject_unknown(j, {"lo", "hi", "count"}, origin);
    take(j, "lo", dim.lo, origin);
    take(j, "hi", dim.hi, origin);
    take(j, "count", dim.count, origin);
}

void parse_box(const json& j, SearchBox& box, const std::string& origin) {
    reject_unknown(j,
                   {"kappa", "gamma", "mu_xi", "sigma_chi", "sigma_xi", "rho", "s", "budget"},
                   origin);
    if (j.contains("kappa")) parse_dim(j.at("kappa"), box.kappa, origin + ".kappa");
    if (j.contains("gamma")) parse_dim(j.at("gamma"), box.gamma, origin + ".gamma");
    if (j.contains("mu_xi")) parse_dim(j.at("mu_xi"), box.mu_xi, origin + ".mu_xi");
    if (j.contains("sigma_chi")) parse_dim(j.at("sigma_chi"), box.sigma_chi, origin + ".sigma_chi");
    if (j.contains("sigma_xi")) parse_dim(j.at("sigma_xi"), box.sigma_xi, origin + ".sigma_xi");
    if (j.contains("rho")) parse_dim(j.at("rho"), box.rho, origin + ".rho");
    if (j.contains("s")) parse_dim(j.at("s"), box.s, origin + ".s");
    take(j, "budget", box.budget, origin);
}

void parse_optim(const json& j, OptimOptions& opt, const std::string& origin) {
    reject_unknown(j, {"max_iterations", "f_tol", "x_tol", "initial_step", "estimate_lambda"},
                   origin);
    take(j, "max_iterations", opt.max_iterations, origin);
    take(j, "f_tol", opt.f_tol, origin);
    take(j, "x_tol", opt.x_tol, origin);
    take(j, "initial_step", opt.initial_step, origin);
    take(j, "estimate_lambda", opt.estimate_lambda, origin);
}

void apply_file(const json& j, RunConfig& cfg, const std::string& origin) {
    reject_unknown(j,
                   {"theta", "dt", "n_t", "contracts", "spacing", "rolling", "fixed_x0", "x0",
                    "seed", "stream", "out_dir", "threads", "box", "optim", "sizes",
                    "replications"},
                   origin);
    if (j.contains("theta")) cfg.theta = parse_theta(j.at("theta"), origin + ".theta");
    take(j, "dt", cfg.dt, origin);
    take(j, "n_t", cfg.n_t, origin);
    take(j, "contracts", cfg.contracts, origin);
    take(j, "spacing", cfg.spacing, origin);
    take(j, "rolling", cfg.rolling, origin);
    take(j, "fixed_x0", cfg.fixed_x0, origin);
    if (j.contains("x0")) {
        const json& x0 = j.at("x0");
        reject_unknown(x0, {"chi", "xi"}, origin + ".x0");
        take(x0, "chi", cfg.x0.chi, origin + ".x0");
        take(x0, "xi", cfg.x0.xi, origin + ".x0");
    }
    take(j, "seed", cfg.seed, origin);
    take(j, "stream", cfg.stream, origin);
    take(j, "out_dir", cfg.out_dir, origin);
    take(j, "threads", cfg.threads, origin);
    if (j.contains("box")) parse_box(j.at("box"), cfg.box, origin + ".box");
    if (j.contains("optim")) parse_optim(j.at("optim"), cfg.optim, origin + ".optim");
    take(j, "sizes", cfg.sizes, origin);
    take(j, "replications", cfg.replications, origin);
}

}  // namespace

SimConfig RunConfig::sim_config() const {
    SimConfig cfg;
    cfg.dt = dt;
    cfg.n_steps = n_t;
    cfg.contracts = contracts;
    cfg.spacing = spacing;
    cfg.rolling = rolling;
    cfg.fixed_x0 = fixed_x0;
    cfg.x0 = x0;
    return cfg;
}

StudyOptions RunConfig::study_options() const {
    StudyOptions opts;
    opts.dt = dt;
    opts.contracts = contracts;
    opts.spacing = spacing;
    opts.rolling = rolling;
    opts.box = box;
    opts.optim = optim;
    opts.threads = threads;
    return opts;
}

void RunConfig::validate() const {
    try {
        validate_params(theta);
    } catch (const std::domain_error& e) {
        throw ConfigError(std::string("theta: ") + e.what());
    }
    if (theta.n_contracts() != contracts)
        throw ConfigError("theta has " + std::to_string(theta.n_contracts()) +
                          " noise sds but contracts = " + std::to_string(contracts));
    if (!(dt > 0.0) || !std::isfinite(dt)) throw ConfigError("dt must be a positive number");
    if (n_t < 1) throw ConfigError("n_t must be >= 1");
    if (contracts < 1) throw ConfigError("contracts must be >= 1");
    if (!(spacing > 0.0) || !std::isfinite(spacing))
        throw ConfigError("spacing must be a positive number");
    if (!std::isfinite(x0.chi) || !std::isfinite(x0.xi)) throw ConfigError("x0 must be finite");
    if (out_dir.empty()) throw ConfigError("out_dir must not be empty");
    if (threads < 0) throw ConfigError("threads must be >= 0");
    if (sizes.empty()) throw ConfigError("sizes must not be empty");
    for (int n : sizes)
        if (n < 1) throw ConfigError("sizes entries must be >= 1");
    if (replications < 1) throw ConfigError("replications must be >= 1");
    try {
        box.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    if (optim.max_iterations < 1) throw ConfigError("optim.max_iterations must be >= 1");
    if (!(optim.f_tol > 0.0)) throw ConfigError("optim.f_tol must be > 0");
    if (!(optim.x_tol > 0.0)) throw ConfigError("optim.x_tol must be > 0");
    if (!(optim.initial_step > 0.0)) throw ConfigError("optim.initial_step must be > 0");
}

RunConfig load_run_config(const std::optional<std::filesystem::path>& file,
                          const ConfigOverrides& overrides) {
    RunConfig cfg;
    if (file) {
        std::ifstream in(*file, std::ios::binary);
        if (!in) throw ConfigError("cannot open config file " + file->string());
        json j;
        try {
            j = json::parse(in);
        } catch (const json::exception& e) {
            throw ConfigError(file->string() + ": " + e.what());
        }
        apply_file(j, cfg, file->string());
    }

    if (overrides.seed) cfg.seed = *overrides.seed;
    if (overrides.out_dir) cfg.out_dir = *overrides.out_dir;
    if (overrides.n_t) cfg.n_t = *overrides.n_t;
    if (overrides.contracts) cfg.contracts = *overrides.contracts;
    if (overrides.dt) cfg.dt = *overrides.dt;
    if (overrides.threads) cfg.threads = *overrides.threads;

    // A contracts override keeps a tied noise vector usable by retying it to
    // the new width; distinct per-contract sds cannot be resized silently.
    if (cfg.theta.n_contracts() != cfg.contracts && cfg.contracts >= 1 &&
        !cfg.theta.s.empty()) {
        const bool tied = std::all_of(cfg.theta.s.begin(), cfg.theta.s.end(),
                                      [&](double v) { return v == cfg.theta.s[0]; });
        if (!tied)
            throw ConfigError("theta has " + std::to_string(cfg.theta.n_contracts()) +
                              " distinct noise sds; cannot retie for contracts = " +
                              std::to_string(cfg.contracts));
        cfg.theta.s.assign(static_cast<std::size_t>(cfg.contracts), cfg.theta.s[0]);
    }

    cfg.validate();
    return cfg;
}

}  // namespace ss2f
