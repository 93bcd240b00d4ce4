#include "ss2f/estimate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "ss2f/parallel.hpp"

namespace ss2f {

namespace {

constexpr double inf = std::numeric_limits<double>::infinity();

// Smallest kappa - gamma gap the transform can represent; keeps log() finite
// when a start sits exactly on the constraint boundary.
constexpr double kGapFloor = 1e-10;

void check_dim(const GridDim& dim, const char* name) {
    if (dim.count < 1)
        throw std::invalid_argument(std::string("search box: ") + name +
                                    " needs at least one grid point");
    if (!std::isfinite(dim.lo) || !std::isfinite(dim.hi))
        throw std::invalid_argument(std::string("search box: ") + name +
                                    " bounds must be finite");
    if (dim.count > 1 && !(dim.lo < dim.hi))
        throw std::invalid_argument(std::string("search box: ") + name +
                                    " needs lo < hi when count > 1");
}

}  // namespace

double GridDim::point(int i) const {
    if (count == 1) return lo;
    return lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(count - 1);
}

std::size_t SearchBox::size() const {
    return static_cast<std::size_t>(kappa.count) * gamma.count * mu_xi.count *
           sigma_chi.count * sigma_xi.count * rho.count * s.count;
}

void SearchBox::validate() const {
    check_dim(kappa, "kappa");
    check_dim(gamma, "gamma");
    check_dim(mu_xi, "mu_xi");
    check_dim(sigma_chi, "sigma_chi");
    check_dim(sigma_xi, "sigma_xi");
    check_dim(rho, "rho");
    check_dim(s, "s");
    if (!(kappa.lo > 0.0)) throw std::invalid_argument("search box: kappa must stay positive");
    if (!(gamma.lo > 0.0)) throw std::invalid_argument("search box: gamma must stay positive");
    if (!(sigma_chi.lo > 0.0))
        throw std::invalid_argument("search box: sigma_chi must stay positive");
    if (!(sigma_xi.lo > 0.0))
        throw std::invalid_argument("search box: sigma_xi must stay positive");
    if (!(s.lo > 0.0)) throw std::invalid_argument("search box: s must stay positive");
    if (!(rho.lo > -1.0 && rho.hi < 1.0))
        throw std::invalid_argument("search box: rho must stay inside (-1, 1)");
    std::size_t total = 1;
    for (int c : {kappa.count, gamma.count, mu_xi.count, sigma_chi.count, sigma_xi.count,
                  rho.count, s.count}) {
        const auto cc = static_cast<std::size_t>(c);
        if (total > budget / cc)
            throw std::invalid_argument("search box: grid size exceeds the budget of " +
                                        std::to_string(budget) + " points");
        total *= cc;
    }
}

ParamVector SearchBox::point(std::size_t i, int n_contracts) const {
    // Row-major order (kappa slowest, s fastest).
    const int is = static_cast<int>(i % s.count);
    i /= s.count;
    const int ir = static_cast<int>(i % rho.count);
    i /= rho.count;
    const int ix = static_cast<int>(i % sigma_xi.count);
    i /= sigma_xi.count;
    const int ic = static_cast<int>(i % sigma_chi.count);
    i /= sigma_chi.count;
    const int im = static_cast<int>(i % mu_xi.count);
    i /= mu_xi.count;
    const int ig = static_cast<int>(i % gamma.count);
    i /= gamma.count;
    const int ik = static_cast<int>(i);
    return ParamVector::tied(kappa.point(ik), gamma.point(ig), mu_xi.point(im),
                             sigma_chi.point(ic), sigma_xi.point(ix), rho.point(ir),
                             0.0, 0.0, s.point(is), n_contracts);
}

Eigen::VectorXd to_unconstrained(const ParamVector& p, bool with_lambda) {
    validate_params(p);
    Eigen::VectorXd z(with_lambda ? 9 : 7);
    z[0] = std::log(std::max(p.kappa - p.gamma, kGapFloor));
    z[1] = std::log(p.gamma);
    z[2] = p.mu_xi;
    z[3] = std::log(p.sigma_chi);
    z[4] = std::log(p.sigma_xi);
    z[5] = std::atanh(p.rho);
    z[6] = std::log(p.s.empty() ? kGapFloor : p.s[0]);
    if (with_lambda) {
        z[7] = p.lambda_chi;
        z[8] = p.lambda_xi;
    }
    return z;
}

ParamVector from_unconstrained(const Eigen::VectorXd& z, int n_contracts, bool with_lambda) {
    const Eigen::Index expected = with_lambda ? 9 : 7;
    if (z.size() != expected)
        throw std::invalid_argument("from_unconstrained: expected " + std::to_string(expected) +
                                    " coordinates, got " + std::to_string(z.size()));
    const double gamma = std::exp(z[1]);
    const double kappa = gamma + std::exp(z[0]);
    return ParamVector::tied(kappa, gamma, z[2], std::exp(z[3]), std::exp(z[4]),
                             std::tanh(z[5]), with_lambda ? z[7] : 0.0,
                             with_lambda ? z[8] : 0.0, std::exp(z[6]), n_contracts);
}

ParamVector grid_search(const SearchBox& box, const ObservationPanel& panel, double dt,
                        int threads) {
    box.validate();
    const std::size_t total = box.size();
    const int n = panel.contracts();

    std::vector<double> values(total, inf);
    parallel_for(total, threads, [&](std::size_t i) {
        const ParamVector theta = box.point(i, n);
        if (theta.kappa < theta.gamma) return;  // identification constraint
        values[i] = neg_log_likelihood(theta, panel, dt);
    });

    std::size_t best = total;
    double best_value = inf;
    for (std::size_t i = 0; i < total; ++i) {
        if (values[i] < best_value) {
            best_value = values[i];
            best = i;
        }
    }
    if (best == total)
        throw std::runtime_error(
            "grid_search: no feasible grid point produced a finite likelihood");
    return box.point(best, n);
}

EstimationResult mle(const ParamVector& theta0, const ObservationPanel& panel, double dt,
                     const OptimOptions& opts) {
    validate_params(theta0);
    if (theta0.kappa < theta0.gamma)
        throw std::invalid_argument("mle: start violates the kappa >= gamma constraint");

    const int n = panel.contracts();
    const bool with_lambda = opts.estimate_lambda;
    auto objective = [&](const Eigen::VectorXd& z) {
        return neg_log_likelihood(from_unconstrained(z, n, with_lambda), panel, dt);
    };

    NelderMeadOptions nm;
    nm.max_iterations = opts.max_iterations;
    nm.f_tol = opts.f_tol;
    nm.x_tol = opts.x_tol;
    nm.initial_step = opts.initial_step;
    const NelderMeadResult r = nelder_mead(objective, to_unconstrained(theta0, with_lambda), nm);

    EstimationResult out;
    out.theta_hat = from_unconstrained(r.x, n, with_lambda);
    out.nll = r.f;
    out.theta0 = theta0;
    out.iterations = r.iterations;
    out.evaluations = r.evaluations;
    out.converged = r.converged;
    out.constraint_active =
        out.theta_hat.kappa - out.theta_hat.gamma <= 1e-6 * std::max(1.0, out.theta_hat.gamma);
    return out;
}

std::pair<EstimationResult, FilterOutput> estimate_full(const ObservationPanel& panel,
                                                        const SearchBox& box, double dt,
                                                        const OptimOptions& opts, int threads) {
    const ParamVector theta0 = grid_search(box, panel, dt, threads);
    EstimationResult result = mle(theta0, panel, dt, opts);
    FilterOutput filt = kf_run(result.theta_hat, panel, dt);
    return {std::move(result), std::move(filt)};
}

std::vector<StudyRun> convergence_study(const ParamVector& theta_true,
                                        const std::vector<int>& sizes, int replications,
                                        RngSeed seed, const StudyOptions& opts) {
    validate_params(theta_true);
    if (sizes.empty()) throw std::invalid_argument("convergence_study: no sample sizes");
    for (int n_t : sizes)
        if (n_t < 1) throw std::invalid_argument("convergence_study: sample sizes must be >= 1");
    if (replications < 1)
        throw std::invalid_argument("convergence_study: replications must be >= 1");
    if (theta_true.n_contracts() != opts.contracts)
        throw std::invalid_argument("convergence_study: theta_true has " +
                                    std::to_string(theta_true.n_contracts()) +
                                    " noise sds for " + std::to_string(opts.contracts) +
                                    " contracts");

    const std::size_t cells = sizes.size() * static_cast<std::size_t>(replications);
    std::vector<StudyRun> runs(cells);

    parallel_for(cells, opts.threads, [&](std::size_t cell) {
        const std::size_t i = cell / static_cast<std::size_t>(replications);
        const int r = static_cast<int>(cell % static_cast<std::size_t>(replications));
        StudyRun& run = runs[cell];
        run.n_t = sizes[i];
        run.replication = r;
        try {
            SimConfig cfg;
            cfg.dt = opts.dt;
            cfg.n_steps = sizes[i];
            cfg.contracts = opts.contracts;
            cfg.spacing = opts.spacing;
            cfg.rolling = opts.rolling;
            const auto [path, panel] =
                simulate_panel(theta_true, cfg, seed.offset(3 * cell));
            auto [est, filt] = estimate_full(panel, opts.box, opts.dt, opts.optim, 1);
            (void)filt;
            run.theta_hat = est.theta_hat;
            run.nll = est.nll;
            run.converged = est.converged;
            run.ok = true;
        } catch (const std::exception& e) {
            run.ok = false;
            run.error = e.what();
        }
    });
    return runs;
}

}  // namespace ss2f
