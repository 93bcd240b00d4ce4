#include "ss2f/io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <json.hpp>
#include <limits>
#include <stdexcept>
#include <string>

#include "ss2f/csv.hpp"

namespace ss2f::io {

namespace {

using nlohmann::json;

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void require_keys(const json& j, std::initializer_list<const char*> keys,
                  const std::string& origin) {
    if (!j.is_object()) throw std::runtime_error(origin + ": expected a JSON object");
    for (const char* k : keys)
        if (!j.contains(k)) throw std::runtime_error(origin + ": missing key '" + k + "'");
    for (const auto& item : j.items()) {
        const bool known = std::any_of(keys.begin(), keys.end(), [&](const char* k) {
            return item.key() == k;
        });
        if (!known) throw std::runtime_error(origin + ": unknown key '" + item.key() + "'");
    }
}

json theta_to_json(const ParamVector& p) {
    return json{{"kappa", p.kappa},
                {"gamma", p.gamma},
                {"mu_xi", p.mu_xi},
                {"sigma_chi", p.sigma_chi},
                {"sigma_xi", p.sigma_xi},
                {"rho", p.rho},
                {"lambda_chi", p.lambda_chi},
                {"lambda_xi", p.lambda_xi},
                {"s", p.s}};
}

ParamVector theta_from_json(const json& j, const std::string& origin) {
    require_keys(j,
                 {"kappa", "gamma", "mu_xi", "sigma_chi", "sigma_xi", "rho", "lambda_chi",
                  "lambda_xi", "s"},
                 origin);
    ParamVector p;
    p.kappa = j.at("kappa").get<double>();
    p.gamma = j.at("gamma").get<double>();
    p.mu_xi = j.at("mu_xi").get<double>();
    p.sigma_chi = j.at("sigma_chi").get<double>();
    p.sigma_xi = j.at("sigma_xi").get<double>();
    p.rho = j.at("rho").get<double>();
    p.lambda_chi = j.at("lambda_chi").get<double>();
    p.lambda_xi = j.at("lambda_xi").get<double>();
    p.s = j.at("s").get<std::vector<double>>();
    return p;
}

json load_json(const std::filesystem::path& file) {
    std::ifstream in(file, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + file.string() + " for reading");
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw std::runtime_error(file.string() + ": " + e.what());
    }
}

void save_json(const json& j, const std::filesystem::path& file) {
    std::ofstream out(file, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + file.string() + " for writing");
    out << j.dump(2) << '\n';
    if (!out) throw std::runtime_error("write failed on " + file.string());
}

}  // namespace

void write_states_csv(const StatePath& path, const std::filesystem::path& file) {
    csv::Writer w(file);
    w.header({"t", "chi", "xi"});
    for (std::size_t k = 0; k < path.size(); ++k)
        w.row({path.times[k], path.states[k].chi, path.states[k].xi});
}

StatePath read_states_csv(const std::filesystem::path& file) {
    const csv::Table table = csv::read(file);
    if (table.header != std::vector<std::string>{"t", "chi", "xi"})
        throw std::runtime_error(table.origin + ": expected header t,chi,xi");
    StatePath path;
    path.times.resize(table.rows.size());
    path.states.resize(table.rows.size());
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        path.times[r] = table.number(r, 0);
        path.states[r] = {table.number(r, 1), table.number(r, 2)};
    }
    path.dt = path.times.size() >= 2 ? path.times[1] - path.times[0] : 0.0;
    return path;
}

void write_panel_csv(const ObservationPanel& panel, const std::filesystem::path& file) {
    const int n = panel.contracts();
    std::vector<std::string> header{"t"};
    for (int i = 1; i <= n; ++i) header.push_back("tau_" + std::to_string(i));
    for (int i = 1; i <= n; ++i) header.push_back("y_" + std::to_string(i));

    csv::Writer w(file);
    w.header(header);
    std::vector<double> cells(1 + 2 * static_cast<std::size_t>(n));
    for (Eigen::Index j = 0; j < panel.dates(); ++j) {
        cells[0] = panel.times[static_cast<std::size_t>(j)];
        for (int i = 0; i < n; ++i) {
            cells[1 + static_cast<std::size_t>(i)] = panel.taus(j, i);
            cells[1 + static_cast<std::size_t>(n + i)] = panel.y(j, i);
        }
        w.row(cells);
    }
}

ObservationPanel read_panel_csv(const std::filesystem::path& file) {
    const csv::Table table = csv::read(file);
    const std::size_t cols = table.header.size();
    if (cols < 3 || cols % 2 == 0)
        throw std::runtime_error(table.origin +
                                 ": expected header t,tau_1..tau_n,y_1..y_n");
    const auto n = static_cast<Eigen::Index>((cols - 1) / 2);
    if (table.header[0] != "t" || table.header[1] != "tau_1" ||
        table.header[1 + static_cast<std::size_t>(n)] != "y_1")
        throw std::runtime_error(table.origin +
                                 ": expected header t,tau_1..tau_n,y_1..y_n");

    ObservationPanel panel;
    const auto m = static_cast<Eigen::Index>(table.rows.size());
    panel.times.resize(static_cast<std::size_t>(m));
    panel.taus.resize(m, n);
    panel.y.resize(m, n);
    for (Eigen::Index j = 0; j < m; ++j) {
        const auto r = static_cast<std::size_t>(j);
        panel.times[r] = table.number(r, 0);
        for (Eigen::Index i = 0; i < n; ++i) {
            panel.taus(j, i) = table.number(r, 1 + static_cast<std::size_t>(i));
            panel.y(j, i) = table.number(r, 1 + static_cast<std::size_t>(n + i));
        }
    }
    return panel;
}

void write_filter_csv(const FilterOutput& out, const std::filesystem::path& file) {
    std::size_t n = 0;
    for (const auto& e : out.innovations) n = std::max(n, static_cast<std::size_t>(e.size()));

    std::vector<std::string> header{"t", "a_chi", "a_xi", "P_chichi", "P_chixi", "P_xixi"};
    for (std::size_t i = 1; i <= n; ++i) header.push_back("e_" + std::to_string(i));
    header.push_back("l");

    csv::Writer w(file);
    w.header(header);
    std::vector<double> cells(header.size());
    for (std::size_t k = 0; k < out.times.size(); ++k) {
        cells[0] = out.times[k];
        cells[1] = out.a_filt[k][0];
        cells[2] = out.a_filt[k][1];
        cells[3] = out.P_filt[k](0, 0);
        cells[4] = out.P_filt[k](0, 1);
        cells[5] = out.P_filt[k](1, 1);
        const auto& e = out.innovations[k];
        for (std::size_t i = 0; i < n; ++i)
            cells[6 + i] = i < static_cast<std::size_t>(e.size())
                               ? e[static_cast<Eigen::Index>(i)]
                               : kNaN;
        cells[6 + n] = out.step_loglik[k];
        w.row(cells);
    }
}

void write_meta_json(const ParamVector& p, const SimConfig& cfg, RngSeed seed,
                     const std::filesystem::path& file) {
    json j{{"theta", theta_to_json(p)},
           {"dt", cfg.dt},
           {"n_steps", cfg.n_steps},
           {"contracts", cfg.contracts},
           {"spacing", cfg.spacing},
           {"rolling", cfg.rolling},
           {"fixed_x0", cfg.fixed_x0},
           {"x0", json{{"chi", cfg.x0.chi}, {"xi", cfg.x0.xi}}},
           {"seed", seed.seed},
           {"stream", seed.stream}};
    save_json(j, file);
}

void write_theta_json(const ParamVector& p, const std::filesystem::path& file) {
    save_json(theta_to_json(p), file);
}

ParamVector read_theta_json(const std::filesystem::path& file) {
    return theta_from_json(load_json(file), file.string());
}

void write_estimate_json(const EstimationResult& r, const std::filesystem::path& file) {
    json j{{"theta_hat", theta_to_json(r.theta_hat)},
           {"nll", r.nll},
           {"theta0", theta_to_json(r.theta0)},
           {"iterations", r.iterations},
           {"evaluations", r.evaluations},
           {"converged", r.converged},
           {"constraint_active", r.constraint_active}};
    save_json(j, file);
}

EstimationResult read_estimate_json(const std::filesystem::path& file) {
    const json j = load_json(file);
    const std::string origin = file.string();
    require_keys(j,
                 {"theta_hat", "nll", "theta0", "iterations", "evaluations", "converged",
                  "constraint_active"},
                 origin);
    EstimationResult r;
    r.theta_hat = theta_from_json(j.at("theta_hat"), origin + ":theta_hat");
    r.nll = j.at("nll").get<double>();
    r.theta0 = theta_from_json(j.at("theta0"), origin + ":theta0");
    r.iterations = j.at("iterations").get<int>();
    r.evaluations = j.at("evaluations").get<int>();
    r.converged = j.at("converged").get<bool>();
    r.constraint_active = j.at("constraint_active").get<bool>();
    return r;
}

namespace {

std::vector<double> table_row(const ResultRow& row, bool with_nll) {
    std::vector<double> cells{static_cast<double>(row.n_t),
                              row.theta.kappa,
                              row.theta.gamma,
                              row.theta.mu_xi,
                              row.theta.sigma_chi,
                              row.theta.sigma_xi,
                              row.theta.rho,
                              row.theta.s.empty() ? kNaN : row.theta.s[0]};
    if (with_nll) cells.push_back(row.nll);
    return cells;
}

}  // namespace

void write_results_table_csv(const std::vector<ResultRow>& rows,
                             const std::filesystem::path& file) {
    csv::Writer w(file);
    w.header({"n", "kappa", "gamma", "mu", "sigma_chi", "sigma_xi", "rho", "s", "nll"});
    for (const auto& row : rows) w.row(table_row(row, true));
}

void write_initial_values_csv(const std::vector<ResultRow>& rows,
                              const std::filesystem::path& file) {
    csv::Writer w(file);
    w.header({"n", "kappa", "gamma", "mu", "sigma_chi", "sigma_xi", "rho", "s"});
    for (const auto& row : rows) w.row(table_row(row, false));
}

void write_errors_csv(const std::vector<StudyRun>& runs, const ParamVector& theta_true,
                      const std::filesystem::path& file) {
    csv::Writer w(file);
    w.header({"n_t", "replication", "param", "error"});
    const char* names[] = {"kappa", "gamma", "mu", "sigma_chi", "sigma_xi", "rho", "s"};
    for (const auto& run : runs) {
        double errors[7] = {kNaN, kNaN, kNaN, kNaN, kNaN, kNaN, kNaN};
        if (run.ok) {
            errors[0] = run.theta_hat.kappa - theta_true.kappa;
            errors[1] = run.theta_hat.gamma - theta_true.gamma;
            errors[2] = run.theta_hat.mu_xi - theta_true.mu_xi;
            errors[3] = run.theta_hat.sigma_chi - theta_true.sigma_chi;
            errors[4] = run.theta_hat.sigma_xi - theta_true.sigma_xi;
            errors[5] = run.theta_hat.rho - theta_true.rho;
            if (!run.theta_hat.s.empty() && !theta_true.s.empty())
                errors[6] = run.theta_hat.s[0] - theta_true.s[0];
        }
        for (int i = 0; i < 7; ++i)
            w.row({std::to_string(run.n_t), std::to_string(run.replication), names[i],
                   csv::format(errors[i])});
    }
}

void write_bands_csv(const StatePath& truth, const ConfidenceBands& bands,
                     const std::filesystem::path& file) {
    if (truth.size() != bands.times.size() + 1)
        throw std::invalid_argument("write_bands_csv: path has " + std::to_string(truth.size()) +
                                    " states, bands cover " + std::to_string(bands.times.size()) +
                                    " observation dates");
    csv::Writer w(file);
    w.header({"t", "chi_true", "chi_hat", "chi_lo", "chi_hi", "xi_true", "xi_hat", "xi_lo",
              "xi_hi", "S_true", "S_hat", "S_lo", "S_hi"});
    for (std::size_t k = 0; k < bands.times.size(); ++k) {
        const StateVec& x = truth.states[k + 1];
        w.row({bands.times[k], x.chi, bands.chi_hat[k], bands.chi_lo[k], bands.chi_hi[k], x.xi,
               bands.xi_hat[k], bands.xi_lo[k], bands.xi_hi[k], std::exp(x.chi + x.xi),
               bands.spot_hat[k], bands.spot_lo[k], bands.spot_hi[k]});
    }
}

}  // namespace ss2f::io
