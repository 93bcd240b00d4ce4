#pragma once

#include <Eigen/Dense>

#include "ss2f/moments.hpp"
#include "ss2f/params.hpp"

namespace ss2f {

/// Exact discrete-time transition x_t = c + G x_{t-1} + w_t over a step of
/// width dt, with w_t ~ N(0, W). G is diagonal with entries exp(-kappa dt),
/// exp(-gamma dt); W is the state covariance accumulated over one step, so
/// the discretization is exact at any dt.
struct TransitionSystem {
    Eigen::Vector2d c = Eigen::Vector2d::Zero();
    Eigen::Matrix2d G = Eigen::Matrix2d::Identity();
    Eigen::Matrix2d W = Eigen::Matrix2d::Zero();
    double dt = 0.0;
};

/// Linear observation y_t = d + F' x_t + v_t for n futures contracts at
/// times-to-maturity tau_i. d_i = A(tau_i), F columns are the exponential
/// factor loadings, and v_t ~ N(0, diag(v)) with v_i = s_i^2.
struct MeasurementSystem {
    Eigen::VectorXd d;                           // n-vector of A(tau_i)
    Eigen::Matrix<double, 2, Eigen::Dynamic> F;  // 2 x n loadings
    Eigen::VectorXd v;                           // diagonal of V, entries s_i^2
    Eigen::VectorXd maturities;                  // tau_i >= 0

    int n() const { return static_cast<int>(d.size()); }
};

TransitionSystem transition_system(const ParamVector& p, double dt);

/// Builds the observation system for the given times-to-maturity. Requires
/// p.s to have one entry per maturity; throws std::invalid_argument on a
/// size mismatch or a negative maturity.
MeasurementSystem measurement_system(const ParamVector& p,
                                     const Eigen::VectorXd& maturities);

}  // namespace ss2f
