#pragma once

#include <Eigen/Dense>
#include <utility>

#include "ss2f/params.hpp"

namespace ss2f {

/// Latent state at one instant: short-term deviation and long-term
/// equilibrium level of the log spot price.
struct StateVec {
    double chi = 0.0;
    double xi = 0.0;

    Eigen::Vector2d vec() const { return {chi, xi}; }
    static StateVec from(const Eigen::Vector2d& v) { return {v[0], v[1]}; }
};

/// Probability measure under which moments are evaluated. The risk-neutral
/// measure shifts the factor drifts by the market prices of risk and is the
/// one futures prices are computed under.
enum class Measure { physical, risk_neutral };

/// E[(chi_t, xi_t)] given x0, under either measure. t >= 0.
Eigen::Vector2d state_mean(const ParamVector& p, const StateVec& x0, double t,
                           Measure measure = Measure::physical);

/// Cov[(chi_t, xi_t)], identical under both measures. t >= 0.
Eigen::Matrix2d state_cov(const ParamVector& p, double t);

/// Var[log S_t] = sum of the state covariance entries weighted for the
/// log spot chi_t + xi_t.
double log_spot_variance(const ParamVector& p, double t);

/// Deterministic component A(tau) of the log futures price: risk-premium
/// corrections plus half the log-spot variance at horizon tau.
double a_function(const ParamVector& p, double tau);

/// log E[S_t] (physical) or log E*[S_t] (risk-neutral). The risk-neutral
/// value at horizon T equals the log futures price log F_{0,T}.
double log_expected_spot(const ParamVector& p, const StateVec& x0, double t,
                         Measure measure = Measure::physical);

/// Long-run mean a0 = (0, mu_xi/gamma)' and covariance P0 of the state,
/// used to initialize the filter and to draw stationary starting states.
std::pair<Eigen::Vector2d, Eigen::Matrix2d> stationary_moments(const ParamVector& p);

}  // namespace ss2f
