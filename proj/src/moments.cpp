#include "ss2f/moments.hpp"

#include <cmath>

namespace ss2f {

namespace {

// (1 - e^{-x}) computed without cancellation for small x.
inline double one_minus_exp(double x) { return -std::expm1(-x); }

}  // namespace

Eigen::Vector2d state_mean(const ParamVector& p, const StateVec& x0, double t,
                           Measure measure) {
    const double decay_chi = std::exp(-p.kappa * t);
    const double decay_xi = std::exp(-p.gamma * t);
    double chi = decay_chi * x0.chi;
    double drift = p.mu_xi;
    if (measure == Measure::risk_neutral) {
        chi -= p.lambda_chi / p.kappa * one_minus_exp(p.kappa * t);
        drift -= p.lambda_xi;
    }
    const double xi = drift / p.gamma * one_minus_exp(p.gamma * t) + decay_xi * x0.xi;
    return {chi, xi};
}

Eigen::Matrix2d state_cov(const ParamVector& p, double t) {
    Eigen::Matrix2d cov;
    const double var_chi =
        one_minus_exp(2.0 * p.kappa * t) / (2.0 * p.kappa) * p.sigma_chi * p.sigma_chi;
    const double var_xi =
        one_minus_exp(2.0 * p.gamma * t) / (2.0 * p.gamma) * p.sigma_xi * p.sigma_xi;
    const double cov_cross = one_minus_exp((p.kappa + p.gamma) * t) / (p.kappa + p.gamma) *
                             p.sigma_chi * p.sigma_xi * p.rho;
    cov << var_chi, cov_cross, cov_cross, var_xi;
    return cov;
}

double log_spot_variance(const ParamVector& p, double t) {
    const Eigen::Matrix2d cov = state_cov(p, t);
    return cov(0, 0) + cov(1, 1) + 2.0 * cov(0, 1);
}

double a_function(const ParamVector& p, double tau) {
    return -p.lambda_chi / p.kappa * one_minus_exp(p.kappa * tau) +
           (p.mu_xi - p.lambda_xi) / p.gamma * one_minus_exp(p.gamma * tau) +
           0.5 * log_spot_variance(p, tau);
}

double log_expected_spot(const ParamVector& p, const StateVec& x0, double t,
                         Measure measure) {
    const Eigen::Vector2d mean = state_mean(p, x0, t, measure);
    return mean[0] + mean[1] + 0.5 * log_spot_variance(p, t);
}

std::pair<Eigen::Vector2d, Eigen::Matrix2d> stationary_moments(const ParamVector& p) {
    Eigen::Vector2d a0(0.0, p.mu_xi / p.gamma);
    Eigen::Matrix2d P0;
    const double var_chi = p.sigma_chi * p.sigma_chi / (2.0 * p.kappa);
    const double var_xi = p.sigma_xi * p.sigma_xi / (2.0 * p.gamma);
    const double cov_cross = p.sigma_chi * p.sigma_xi * p.rho / (p.kappa + p.gamma);
    P0 << var_chi, cov_cross, cov_cross, var_xi;
    return {a0, P0};
}

}  // namespace ss2f
