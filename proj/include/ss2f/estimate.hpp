#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "ss2f/kalman.hpp"
#include "ss2f/nelder_mead.hpp"
#include "ss2f/params.hpp"
#include "ss2f/rng.hpp"
#include "ss2f/simulate.hpp"

namespace ss2f {

/// One grid dimension: count points spread evenly over [lo, hi]
/// (count == 1 uses lo).
struct GridDim {
    double lo = 0.0;
    double hi = 0.0;
    int count = 1;

    double point(int i) const;
};

/// Search box for the seven free parameters (risk premia stay fixed at
/// zero during grid search; the measurement noise sd is tied across
/// contracts). Grid points with kappa < gamma are skipped.
struct SearchBox {
    GridDim kappa{0.25, 3.0, 4};
    GridDim gamma{0.25, 3.0, 4};
    GridDim mu_xi{-3.0, 2.0, 4};
    GridDim sigma_chi{0.25, 2.0, 4};
    GridDim sigma_xi{0.25, 2.0, 4};
    GridDim rho{-0.75, 0.75, 4};
    GridDim s{0.01, 1.0, 4};
    std::size_t budget = 100000;  // cap on the Cartesian product size

    std::size_t size() const;
    /// Throws std::invalid_argument on an infeasible box (lo >= hi,
    /// count < 1, bounds outside the parameter domain, budget exceeded).
    void validate() const;
    /// The grid point at flat row-major index i, with s tied across
    /// n_contracts and zero risk premia.
    ParamVector point(std::size_t i, int n_contracts) const;
};

struct OptimOptions {
    int max_iterations = 5000;
    double f_tol = 1e-8;
    double x_tol = 1e-6;
    double initial_step = 0.1;     // in the transformed space
    bool estimate_lambda = false;  // when true, lambda_chi/lambda_xi are free
};

struct EstimationResult {
    ParamVector theta_hat;
    double nll = 0.0;
    ParamVector theta0;  // grid-search winner used as the start
    int iterations = 0;
    int evaluations = 0;
    bool converged = false;
    bool constraint_active = false;  // kappa_hat == gamma_hat (within tolerance)
};

/// Map between the constrained parameter domain and an unconstrained
/// optimization space: gamma = exp(g), kappa = gamma + exp(u), sigmas and s
/// through exp, rho through tanh, drifts through the identity. Every image
/// satisfies kappa >= gamma, so the simplex never leaves the feasible set.
Eigen::VectorXd to_unconstrained(const ParamVector& p, bool with_lambda);
ParamVector from_unconstrained(const Eigen::VectorXd& z, int n_contracts,
                               bool with_lambda);

/// Evaluates the negative log-likelihood on every feasible grid point and
/// returns the winner (lowest-index tie-break, so the result is independent
/// of the number of threads). Throws if the box is infeasible or every
/// point failed to produce a finite value.
ParamVector grid_search(const SearchBox& box, const ObservationPanel& panel,
                        double dt, int threads = 1);

/// Maximizes the conditional log-likelihood from theta0 (which must satisfy
/// kappa >= gamma) with a derivative-free simplex search in the transformed
/// space. Non-convergence is reported through the converged flag, not an
/// exception.
EstimationResult mle(const ParamVector& theta0, const ObservationPanel& panel,
                     double dt, const OptimOptions& opts = {});

/// Grid search, then local maximization, then a filter pass at the optimum.
std::pair<EstimationResult, FilterOutput> estimate_full(const ObservationPanel& panel,
                                                        const SearchBox& box, double dt,
                                                        const OptimOptions& opts = {},
                                                        int threads = 1);

struct StudyOptions {
    double dt = 1.0 / 360.0;
    int contracts = 5;
    double spacing = 1.0 / 12.0;
    bool rolling = false;
    SearchBox box;
    OptimOptions optim;
    int threads = 1;
};

/// One simulate-and-estimate cell of the convergence study.
struct StudyRun {
    int n_t = 0;
    int replication = 0;
    bool ok = false;
    std::string error;  // failure note when !ok
    ParamVector theta_hat;
    double nll = 0.0;
    bool converged = false;
};

/// For each sample size, simulates `replications` independent panels under
/// theta_true and estimates each one. Individual failures are recorded in
/// the run list, never fatal. Cell (size index i, replication r) simulates
/// from stream seed.stream + 3*(i*replications + r), so results are
/// reproducible and independent of scheduling.
std::vector<StudyRun> convergence_study(const ParamVector& theta_true,
                                        const std::vector<int>& sizes,
                                        int replications, RngSeed seed,
                                        const StudyOptions& opts);

}  // namespace ss2f
