#include "ss2f/simulate.hpp"

#include <Eigen/Cholesky>
#include <cmath>
#include <stdexcept>
#include <string>

#include "ss2f/system.hpp"

namespace ss2f {

bool MaturitySchedule::constant() const {
    for (Eigen::Index j = 1; j < taus.rows(); ++j)
        if (taus.row(j) != taus.row(0)) return false;
    return true;
}

namespace {

Eigen::Matrix2d lower_factor(const Eigen::Matrix2d& W, const char* what) {
    Eigen::LLT<Eigen::Matrix2d> llt(W);
    if (llt.info() != Eigen::Success)
        throw std::runtime_error(std::string(what) +
                                 ": covariance is not positive definite (invalid parameters?)");
    return llt.matrixL();
}

}  // namespace

StatePath simulate_states(const ParamVector& p, const StateVec& x0, double dt,
                          int n_steps, RngSeed seed) {
    validate_params(p);
    if (n_steps < 1) throw std::invalid_argument("simulate_states: n_steps must be >= 1");
    if (!(dt > 0.0)) throw std::invalid_argument("simulate_states: dt must be > 0");

    const TransitionSystem trans = transition_system(p, dt);
    const Eigen::Matrix2d noise_l = lower_factor(trans.W, "simulate_states");

    StatePath path;
    path.dt = dt;
    path.times.resize(static_cast<std::size_t>(n_steps) + 1);
    path.states.resize(static_cast<std::size_t>(n_steps) + 1);
    path.times[0] = 0.0;
    path.states[0] = x0;

    NormalRng rng(seed);
    Eigen::Vector2d x = x0.vec();
    for (int k = 1; k <= n_steps; ++k) {
        Eigen::Vector2d z(rng.normal(), rng.normal());
        x = trans.c + trans.G * x + noise_l * z;
        path.times[static_cast<std::size_t>(k)] = k * dt;
        path.states[static_cast<std::size_t>(k)] = StateVec::from(x);
    }
    return path;
}

StateVec draw_stationary_state(const ParamVector& p, NormalRng& rng) {
    const auto [a0, P0] = stationary_moments(validate_params(p));
    const Eigen::Matrix2d l = lower_factor(P0, "draw_stationary_state");
    Eigen::Vector2d z(rng.normal(), rng.normal());
    return StateVec::from(a0 + l * z);
}

MaturitySchedule make_maturity_schedule(int n_contracts, double spacing,
                                        int n_steps, double dt, bool rolling) {
    if (n_contracts < 1)
        throw std::invalid_argument("make_maturity_schedule: need at least one contract");
    if (!(spacing > 0.0))
        throw std::invalid_argument("make_maturity_schedule: spacing must be > 0");
    if (n_steps < 1) throw std::invalid_argument("make_maturity_schedule: n_steps must be >= 1");
    if (!(dt > 0.0)) throw std::invalid_argument("make_maturity_schedule: dt must be > 0");

    MaturitySchedule sched;
    sched.taus.resize(n_steps, n_contracts);

    if (!rolling) {
        Eigen::RowVectorXd row(n_contracts);
        for (int i = 0; i < n_contracts; ++i) row[i] = (i + 1) * spacing;
        sched.taus.rowwise() = row;
        return sched;
    }

    // Each slot holds a calendar expiry; at expiry it rolls forward past the
    // strip, so on the roll date the shortest maturity is back to `spacing`.
    std::vector<double> expiry(static_cast<std::size_t>(n_contracts));
    for (int i = 0; i < n_contracts; ++i) expiry[static_cast<std::size_t>(i)] = (i + 1) * spacing;

    for (int k = 1; k <= n_steps; ++k) {
        const double t = k * dt;
        for (auto& T : expiry)
            while (T - t < 0.5 * dt) T += n_contracts * spacing;
        std::vector<double> taus = expiry;
        for (auto& tau : taus) tau -= t;
        std::sort(taus.begin(), taus.end());
        for (int i = 0; i < n_contracts; ++i)
            sched.taus(k - 1, i) = taus[static_cast<std::size_t>(i)];
    }
    return sched;
}

ObservationPanel simulate_observations(const ParamVector& p, const StatePath& path,
                                       const MaturitySchedule& schedule, RngSeed seed) {
    validate_params(p);
    if (path.size() < 2)
        throw std::invalid_argument("simulate_observations: path has no post-initial states");
    const Eigen::Index n_dates = static_cast<Eigen::Index>(path.size()) - 1;
    if (schedule.dates() != n_dates)
        throw std::invalid_argument("simulate_observations: schedule has " +
                                    std::to_string(schedule.dates()) + " dates for a path with " +
                                    std::to_string(n_dates) + " observation times");
    const int n = schedule.contracts();
    if (p.n_contracts() != n)
        throw std::invalid_argument("simulate_observations: parameter vector has " +
                                    std::to_string(p.n_contracts()) + " noise sds for " +
                                    std::to_string(n) + " contracts");

    ObservationPanel panel;
    panel.times.assign(path.times.begin() + 1, path.times.end());
    panel.taus = schedule.taus;
    panel.y.resize(n_dates, n);

    NormalRng rng(seed);
    MeasurementSystem meas;
    for (Eigen::Index j = 0; j < n_dates; ++j) {
        if (j == 0 || panel.taus.row(j) != panel.taus.row(j - 1))
            meas = measurement_system(p, panel.taus.row(j).transpose());
        const Eigen::Vector2d x = path.states[static_cast<std::size_t>(j) + 1].vec();
        for (int i = 0; i < n; ++i)
            panel.y(j, i) = meas.d[i] + meas.F.col(i).dot(x) +
                            p.s[static_cast<std::size_t>(i)] * rng.normal();
    }
    return panel;
}

std::vector<double> spot_from_states(const StatePath& path) {
    std::vector<double> spot(path.size());
    for (std::size_t k = 0; k < path.size(); ++k)
        spot[k] = std::exp(path.states[k].chi + path.states[k].xi);
    return spot;
}

std::pair<StatePath, ObservationPanel> simulate_panel(const ParamVector& p,
                                                      const SimConfig& cfg, RngSeed seed) {
    StateVec x0 = cfg.x0;
    if (!cfg.fixed_x0) {
        NormalRng rng(seed.offset(2));
        x0 = draw_stationary_state(p, rng);
    }
    StatePath path = simulate_states(p, x0, cfg.dt, cfg.n_steps, seed);
    MaturitySchedule sched =
        make_maturity_schedule(cfg.contracts, cfg.spacing, cfg.n_steps, cfg.dt, cfg.rolling);
    ObservationPanel panel = simulate_observations(p, path, sched, seed.offset(1));
    return {std::move(path), std::move(panel)};
}

}  // namespace ss2f
