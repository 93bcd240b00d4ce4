#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <string>
#include <vector>

#include "ss2f/params.hpp"
#include "ss2f/simulate.hpp"
#include "ss2f/system.hpp"

namespace ss2f {

/// Numerical failure inside the filter (innovation covariance not positive
/// definite). step is the 1-based observation index when known, -1 otherwise.
class FilterError : public std::runtime_error {
public:
    explicit FilterError(const std::string& what, int step = -1)
        : std::runtime_error(what), step_(step) {}
    int step() const { return step_; }

private:
    int step_;
};

/// Filtered (or predicted) state distribution: mean and covariance.
struct FilterState {
    Eigen::Vector2d a = Eigen::Vector2d::Zero();
    Eigen::Matrix2d P = Eigen::Matrix2d::Zero();
};

/// Covariance update form. Joseph is the default for numerical robustness;
/// the plain form is kept for cross-checking since the two are
/// algebraically identical.
enum class CovUpdate { joseph, plain };

/// One predict + update step of the filter.
struct StepResult {
    FilterState predicted;  // a_{t|t-1}, P_{t|t-1}
    FilterState filtered;   // a_t, P_t
    Eigen::VectorXd e;      // prediction error
    Eigen::MatrixXd L;      // innovation covariance
    double l = 0.0;         // step log-likelihood, -log det L - e'L^{-1}e (no 2*pi term)
};

/// Advances the filter from the previous filtered state through one
/// transition and one observation. An empty y (n = 0) performs a pure
/// prediction step with l = 0.
StepResult kf_step(const FilterState& prior, const TransitionSystem& trans,
                   const MeasurementSystem& meas, const Eigen::VectorXd& y,
                   CovUpdate update = CovUpdate::joseph);

/// Full filter pass output. step_loglik omits the 2*pi constant (so
/// total_loglik = sum of step terms); nll() restores it and returns the
/// negative log-likelihood the optimizer minimizes.
struct FilterOutput {
    std::vector<double> times;
    std::vector<Eigen::Vector2d> a_pred, a_filt;
    std::vector<Eigen::Matrix2d> P_pred, P_filt;
    std::vector<Eigen::VectorXd> innovations;      // e_t
    std::vector<Eigen::MatrixXd> innovation_covs;  // L_{t|t-1}
    std::vector<double> step_loglik;               // l_t
    double total_loglik = 0.0;                     // sum of l_t
    long observation_count = 0;                    // total observed entries across dates

    /// Negative log-likelihood including the Gaussian constant:
    /// (N/2) log 2*pi + (1/2) sum(log det L + e'L^{-1}e), N = observed entries.
    double nll() const;
};

/// Runs the filter over a panel, initialized at the stationary moments.
/// Missing entries (NaN) on a date drop the corresponding rows of the
/// observation system for that step. Throws FilterError with the offending
/// step index on numerical failure.
FilterOutput kf_run(const ParamVector& p, const ObservationPanel& panel, double dt,
                    CovUpdate update = CovUpdate::joseph);

/// Negative log-likelihood of the panel under p. Lean accumulation path
/// that stores nothing; returns +infinity for parameter vectors where the
/// filter fails (invalid domain or non-positive-definite innovation
/// covariance), which keeps optimizers moving.
double neg_log_likelihood(const ParamVector& p, const ObservationPanel& panel,
                          double dt);

/// Pointwise confidence bands for the filtered states and the spot price.
struct ConfidenceBands {
    double level = 0.0;
    double z = 0.0;  // standard normal quantile used
    std::vector<double> times;
    std::vector<double> chi_hat, chi_lo, chi_hi;
    std::vector<double> xi_hat, xi_lo, xi_hi;
    std::vector<double> spot_hat, spot_lo, spot_hi;  // exp of the chi+xi band
};

/// Builds level-confidence bands from filtered means and covariances. The
/// spot band exponentiates the band of chi + xi, whose variance combines
/// both diagonal entries and the cross term.
ConfidenceBands state_confidence_band(const FilterOutput& out, double level);

}  // namespace ss2f
