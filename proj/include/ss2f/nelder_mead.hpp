#pragma once

#include <Eigen/Dense>
#include <functional>

namespace ss2f {

struct NelderMeadOptions {
    int max_iterations = 5000;
    double f_tol = 1e-8;        // simplex function-value spread
    double x_tol = 1e-6;        // simplex vertex spread, infinity norm
    double initial_step = 0.1;  // per-coordinate displacement of the initial simplex
};

struct NelderMeadResult {
    Eigen::VectorXd x;
    double f = 0.0;
    int iterations = 0;
    int evaluations = 0;
    bool converged = false;
};

/// Downhill simplex minimizer with the standard reflection/expansion/
/// contraction/shrink coefficients (1, 2, 0.5, 0.5). Declares convergence
/// when both the function-value spread and the vertex spread of the simplex
/// fall below their tolerances. The objective may return +infinity to mark
/// infeasible points.
NelderMeadResult nelder_mead(const std::function<double(const Eigen::VectorXd&)>& f,
                             const Eigen::VectorXd& x0,
                             const NelderMeadOptions& opts = {});

}  // namespace ss2f
