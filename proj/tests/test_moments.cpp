#include <doctest.h>

#include <Eigen/Eigenvalues>
#include <cmath>

#include "oracles.hpp"
#include "ss2f/moments.hpp"

using namespace ss2f;

namespace {

ParamVector truth() { return ParamVector::tied(1.5, 1.0, -2.0, 1.3, 0.3, -0.7, 0.0, 0.0, 0.03, 5); }

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

}  // namespace

TEST_CASE("state mean at t = 0 is the identity") {
    const StateVec x0{0.7, -1.3};
    const Eigen::Vector2d m = state_mean(truth(), x0, 0.0, Measure::physical);
    CHECK(m[0] == 0.7);
    CHECK(m[1] == -1.3);
}

TEST_CASE("state mean long-run limit is (0, mu_xi/gamma)") {
    const Eigen::Vector2d m = state_mean(truth(), StateVec{0.0, 0.0}, 800.0, Measure::physical);
    CHECK(std::abs(m[0]) < 1e-12);
    CHECK(m[1] == doctest::Approx(-2.0).epsilon(1e-12));
}

TEST_CASE("state mean matches the independently evaluated closed form") {
    // Frozen from a 50-digit evaluation of the closed form.
    const Eigen::Vector2d m = state_mean(truth(), StateVec{1.0, 1.0}, 1.0, Measure::physical);
    CHECK(rel(m[0], 0.22313016014842983) < 1e-14);
    CHECK(rel(m[1], -0.89636167648567304) < 1e-14);
}

TEST_CASE("risk-neutral mean equals physical mean when lambdas vanish") {
    const ParamVector p = truth();
    for (double t : {0.0, 0.1, 0.5, 2.0, 10.0}) {
        const Eigen::Vector2d a = state_mean(p, StateVec{0.4, -1.0}, t, Measure::physical);
        const Eigen::Vector2d b = state_mean(p, StateVec{0.4, -1.0}, t, Measure::risk_neutral);
        CHECK(a == b);
    }
}

TEST_CASE("risk-neutral mean applies the premium corrections") {
    ParamVector p = truth();
    p.lambda_chi = 0.3;
    p.lambda_xi = -0.2;
    for (double t : {0.05, 0.7, 3.0}) {
        const Eigen::Vector2d got = state_mean(p, StateVec{1.0, -2.0}, t, Measure::risk_neutral);
        const Eigen::Vector2d want = oracle::state_mean(p, 1.0, -2.0, t, true);
        CHECK(rel(got[0], want[0]) < 1e-14);
        CHECK(rel(got[1], want[1]) < 1e-14);
    }
}

TEST_CASE("state covariance at t = 0 is zero") {
    CHECK(state_cov(truth(), 0.0).isZero(0.0));
}

TEST_CASE("state covariance converges to the stationary matrix") {
    const ParamVector p = truth();
    const Eigen::Matrix2d c = state_cov(p, 800.0);
    CHECK(rel(c(0, 0), 0.56333333333333333) < 1e-14);
    CHECK(rel(c(0, 1), -0.1092) < 1e-14);
    CHECK(rel(c(1, 1), 0.045) < 1e-14);
    CHECK(c(0, 1) == c(1, 0));
}

TEST_CASE("state covariance is PSD over a parameter and time grid") {
    NormalRng rng({11, 0});
    for (int k = 0; k < 40; ++k) {
        const ParamVector p = oracle::random_theta(rng, 1);
        for (double t : {0.0, 1e-6, 0.01, 0.3, 2.0, 50.0}) {
            const Eigen::Matrix2d c = state_cov(p, t);
            CHECK(c(0, 1) == c(1, 0));
            Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(c);
            CHECK(es.eigenvalues().minCoeff() >= -1e-12);
        }
    }
}

TEST_CASE("state covariance at tiny dt matches the linearized form") {
    const ParamVector p = truth();
    const double dt = 1e-6;
    const Eigen::Matrix2d exact = state_cov(p, dt);
    const Eigen::Matrix2d lin = oracle::linearized_w(p, dt);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) CHECK(rel(exact(i, j), lin(i, j)) < 1e-4);
}

TEST_CASE("linearization error shrinks linearly in dt") {
    const ParamVector p = truth();
    double prev = 0.0;
    for (double dt : {1e-4, 1e-5, 1e-6}) {
        const Eigen::Matrix2d exact = state_cov(p, dt);
        const Eigen::Matrix2d lin = oracle::linearized_w(p, dt);
        double err = 0.0;
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) err = std::max(err, rel(exact(i, j), lin(i, j)));
        if (prev > 0.0) {
            const double shrink = err / prev;
            CHECK(shrink > 0.05);
            CHECK(shrink < 0.2);
        }
        prev = err;
    }
}

TEST_CASE("stationary convergence is monotone and tight at t = 50/min(kappa,gamma)") {
    NormalRng rng({12, 0});
    for (int k = 0; k < 10; ++k) {
        const ParamVector p = oracle::random_theta(rng, 1);
        const auto [a0, p0] = stationary_moments(p);
        (void)a0;
        double prev_gap = std::numeric_limits<double>::infinity();
        const double horizon = 50.0 / std::min(p.kappa, p.gamma);
        for (double frac : {0.02, 0.05, 0.1, 0.25, 0.5, 1.0}) {
            const Eigen::Matrix2d c = state_cov(p, frac * horizon);
            const double gap = (c - p0).cwiseAbs().maxCoeff();
            CHECK(gap <= prev_gap + 1e-16);
            prev_gap = gap;
        }
        const Eigen::Matrix2d at_horizon = state_cov(p, horizon);
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) CHECK(rel(at_horizon(i, j), p0(i, j)) < 1e-10);
    }
}

TEST_CASE("a_function vanishes at tau = 0") {
    NormalRng rng({13, 0});
    for (int k = 0; k < 20; ++k) CHECK(a_function(oracle::random_theta(rng, 1), 0.0) == 0.0);
}

TEST_CASE("a_function matches the five-term evaluation") {
    const ParamVector p = truth();
    CHECK(rel(a_function(p, 1.0), -1.0773791706038244) < 1e-14);
    ParamVector q = p;
    q.lambda_chi = 0.25;
    q.lambda_xi = -0.4;
    for (double tau : {0.05, 0.5, 1.5, 4.0})
        CHECK(rel(a_function(q, tau), oracle::a_function(q, tau)) < 1e-13);
}

TEST_CASE("a_function long-maturity limit") {
    CHECK(rel(a_function(truth(), 1000.0), -1.8050333333333333) < 1e-13);
}

TEST_CASE("log expected spot at t = 0 is chi0 + xi0") {
    CHECK(log_expected_spot(truth(), StateVec{0.5, -2.0}, 0.0, Measure::physical) ==
          doctest::Approx(-1.5).epsilon(1e-15));
}

TEST_CASE("measures coincide at lambda = 0") {
    const ParamVector p = truth();
    for (double t : {0.0, 0.2, 1.0, 7.0}) {
        const double a = log_expected_spot(p, StateVec{0.3, -1.0}, t, Measure::physical);
        const double b = log_expected_spot(p, StateVec{0.3, -1.0}, t, Measure::risk_neutral);
        CHECK(a == b);
    }
}

TEST_CASE("log expected spot matches the independently summed terms") {
    const double got = log_expected_spot(truth(), StateVec{0.5, -2.0}, 0.5, Measure::physical);
    CHECK(rel(got, -1.6086893490138584) < 1e-14);
}

TEST_CASE("risk-neutral log expected spot is the log futures price") {
    ParamVector p = truth();
    p.lambda_chi = 0.2;
    p.lambda_xi = -0.1;
    const StateVec x0{0.8, -1.7};
    for (double tau : {1.0 / 12, 0.5, 2.0}) {
        const double lhs = log_expected_spot(p, x0, tau, Measure::risk_neutral);
        const double rhs =
            std::exp(-p.kappa * tau) * x0.chi + std::exp(-p.gamma * tau) * x0.xi +
            oracle::a_function(p, tau);
        CHECK(rel(lhs, rhs) < 1e-13);
    }
}

TEST_CASE("log spot variance combines all covariance entries") {
    const ParamVector p = truth();
    const Eigen::Matrix2d c = state_cov(p, 0.5);
    CHECK(rel(log_spot_variance(p, 0.5), c(0, 0) + c(1, 1) + 2 * c(0, 1)) < 1e-15);
    CHECK(rel(log_spot_variance(p, 0.5), 0.31025474923126848) < 1e-14);
}

TEST_CASE("stationary moments match the initialization formulas") {
    const auto [a0, p0] = stationary_moments(truth());
    CHECK(a0[0] == 0.0);
    CHECK(a0[1] == doctest::Approx(-2.0).epsilon(1e-15));
    CHECK(rel(p0(0, 0), 1.3 * 1.3 / 3.0) < 1e-15);
    CHECK(rel(p0(0, 1), -0.1092) < 1e-14);
    CHECK(rel(p0(1, 1), 0.045) < 1e-14);
}

TEST_CASE("stationary covariance is symmetric positive definite for valid theta") {
    NormalRng rng({14, 0});
    for (int k = 0; k < 30; ++k) {
        const auto [a0, p0] = stationary_moments(oracle::random_theta(rng, 1));
        (void)a0;
        CHECK(p0(0, 1) == p0(1, 0));
        Eigen::LLT<Eigen::Matrix2d> llt(p0);
        CHECK(llt.info() == Eigen::Success);
    }
}
