#pragma once

// Independent reference implementations used only by tests. Everything here
// is evaluated straight from scalar closed forms, separate from the library
// code paths, so agreement between the two is evidence rather than tautology.

#include <Eigen/Cholesky>
#include <Eigen/Dense>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "ss2f/params.hpp"
#include "ss2f/rng.hpp"
#include "ss2f/simulate.hpp"

namespace oracle {

using ss2f::ObservationPanel;
using ss2f::ParamVector;

inline Eigen::Vector2d state_mean(const ParamVector& p, double chi0, double xi0, double t,
                                  bool risk_neutral = false) {
    double m1 = std::exp(-p.kappa * t) * chi0;
    double m2 = p.mu_xi / p.gamma * (1.0 - std::exp(-p.gamma * t)) + std::exp(-p.gamma * t) * xi0;
    if (risk_neutral) {
        m1 += -(p.lambda_chi / p.kappa) * (1.0 - std::exp(-p.kappa * t));
        m2 = (p.mu_xi - p.lambda_xi) / p.gamma * (1.0 - std::exp(-p.gamma * t)) +
             std::exp(-p.gamma * t) * xi0;
    }
    return {m1, m2};
}

inline Eigen::Matrix2d state_cov(const ParamVector& p, double t) {
    Eigen::Matrix2d c;
    c(0, 0) = (1.0 - std::exp(-2.0 * p.kappa * t)) * p.sigma_chi * p.sigma_chi / (2.0 * p.kappa);
    c(1, 1) = (1.0 - std::exp(-2.0 * p.gamma * t)) * p.sigma_xi * p.sigma_xi / (2.0 * p.gamma);
    c(0, 1) = (1.0 - std::exp(-(p.kappa + p.gamma) * t)) * p.sigma_chi * p.sigma_xi * p.rho /
              (p.kappa + p.gamma);
    c(1, 0) = c(0, 1);
    return c;
}

inline Eigen::Matrix2d stationary_cov(const ParamVector& p) {
    Eigen::Matrix2d c;
    c(0, 0) = p.sigma_chi * p.sigma_chi / (2.0 * p.kappa);
    c(1, 1) = p.sigma_xi * p.sigma_xi / (2.0 * p.gamma);
    c(0, 1) = p.sigma_chi * p.sigma_xi * p.rho / (p.kappa + p.gamma);
    c(1, 0) = c(0, 1);
    return c;
}

// Five-term evaluation of A(tau), written out term by term.
inline double a_function(const ParamVector& p, double tau) {
    const double risk_term = -(p.lambda_chi / p.kappa) * (1.0 - std::exp(-p.kappa * tau));
    const double drift_term =
        (p.mu_xi - p.lambda_xi) / p.gamma * (1.0 - std::exp(-p.gamma * tau));
    const double var_chi =
        (1.0 - std::exp(-2.0 * p.kappa * tau)) * p.sigma_chi * p.sigma_chi / (2.0 * p.kappa);
    const double var_xi =
        (1.0 - std::exp(-2.0 * p.gamma * tau)) * p.sigma_xi * p.sigma_xi / (2.0 * p.gamma);
    const double cov_term = 2.0 * (1.0 - std::exp(-(p.kappa + p.gamma) * tau)) * p.sigma_chi *
                            p.sigma_xi * p.rho / (p.kappa + p.gamma);
    return risk_term + drift_term + 0.5 * (var_chi + var_xi + cov_term);
}

// Euler-style one-step noise covariance, first order in dt.
inline Eigen::Matrix2d linearized_w(const ParamVector& p, double dt) {
    Eigen::Matrix2d w;
    w(0, 0) = p.sigma_chi * p.sigma_chi * dt;
    w(1, 1) = p.sigma_xi * p.sigma_xi * dt;
    w(0, 1) = p.rho * p.sigma_chi * p.sigma_xi * dt;
    w(1, 0) = w(0, 1);
    return w;
}

/// Log-density of the observed entries of a panel as one stacked
/// multivariate normal, built from the linear-Gaussian model in closed form
/// (no filtering). NaN entries are treated as missing and excluded. Includes
/// the Gaussian constant, so it is comparable to -FilterOutput::nll().
inline double joint_loglik(const ParamVector& p, const ObservationPanel& panel, double dt) {
    const Eigen::Index n_dates = panel.dates();
    const int n = panel.contracts();

    struct Obs {
        Eigen::Index date;
        int contract;
        double d;
        Eigen::Vector2d f;
        double noise_var;
        double y;
    };
    std::vector<Obs> obs;
    for (Eigen::Index t = 0; t < n_dates; ++t) {
        for (int i = 0; i < n; ++i) {
            if (std::isnan(panel.y(t, i))) continue;
            const double tau = panel.taus(t, i);
            Obs o;
            o.date = t;
            o.contract = i;
            o.d = a_function(p, tau);
            o.f = Eigen::Vector2d(std::exp(-p.kappa * tau), std::exp(-p.gamma * tau));
            o.noise_var = p.s[static_cast<std::size_t>(i)] * p.s[static_cast<std::size_t>(i)];
            o.y = panel.y(t, i);
            obs.push_back(o);
        }
    }
    const auto D = static_cast<Eigen::Index>(obs.size());
    if (D == 0) return 0.0;

    const Eigen::Vector2d c(0.0, p.mu_xi / p.gamma * (1.0 - std::exp(-p.gamma * dt)));
    Eigen::Matrix2d G = Eigen::Matrix2d::Zero();
    G(0, 0) = std::exp(-p.kappa * dt);
    G(1, 1) = std::exp(-p.gamma * dt);
    const Eigen::Matrix2d W = state_cov(p, dt);

    // State mean and covariance at each observation date (date j sits j+1
    // transitions past x0 ~ N(a0, P0)).
    std::vector<Eigen::Vector2d> mx(static_cast<std::size_t>(n_dates));
    std::vector<Eigen::Matrix2d> vx(static_cast<std::size_t>(n_dates));
    Eigen::Vector2d m(0.0, p.mu_xi / p.gamma);
    Eigen::Matrix2d v = stationary_cov(p);
    for (Eigen::Index t = 0; t < n_dates; ++t) {
        m = c + G * m;
        v = G * v * G.transpose() + W;
        mx[static_cast<std::size_t>(t)] = m;
        vx[static_cast<std::size_t>(t)] = v;
    }
    const auto g_power = [&](Eigen::Index k) {
        Eigen::Matrix2d out = Eigen::Matrix2d::Identity();
        for (Eigen::Index i = 0; i < k; ++i) out = out * G;
        return out;
    };

    Eigen::VectorXd r(D);
    Eigen::MatrixXd S(D, D);
    for (Eigen::Index a = 0; a < D; ++a) {
        const Obs& oa = obs[static_cast<std::size_t>(a)];
        r[a] = oa.y - (oa.d + oa.f.dot(mx[static_cast<std::size_t>(oa.date)]));
        for (Eigen::Index b = a; b < D; ++b) {
            const Obs& ob = obs[static_cast<std::size_t>(b)];
            const Obs& early = oa.date <= ob.date ? oa : ob;
            const Obs& late = oa.date <= ob.date ? ob : oa;
            const Eigen::Matrix2d cov_x = vx[static_cast<std::size_t>(early.date)] *
                                          g_power(late.date - early.date).transpose();
            double cov = early.f.dot(cov_x * late.f);
            if (oa.date == ob.date && oa.contract == ob.contract) cov += oa.noise_var;
            S(a, b) = cov;
            S(b, a) = cov;
        }
    }

    Eigen::LLT<Eigen::MatrixXd> llt(S);
    if (llt.info() != Eigen::Success)
        throw std::runtime_error("oracle joint covariance failed Cholesky");
    const double log_det = 2.0 * llt.matrixLLT().diagonal().array().log().sum();
    const double quad = r.dot(llt.solve(r));
    return -0.5 * static_cast<double>(D) * std::log(2.0 * 3.14159265358979323846) -
           0.5 * log_det - 0.5 * quad;
}

/// Random valid parameter vector over moderate ranges, optionally with
/// nonzero risk premia.
inline ParamVector random_theta(ss2f::NormalRng& rng, int n_contracts,
                                bool with_lambda = true) {
    const auto uni = [&](double lo, double hi) { return lo + (hi - lo) * rng.uniform01(); };
    ParamVector p;
    p.kappa = uni(0.2, 3.0);
    p.gamma = uni(0.1, 2.5);
    p.mu_xi = uni(-3.0, 2.0);
    p.sigma_chi = uni(0.2, 1.6);
    p.sigma_xi = uni(0.1, 1.0);
    p.rho = uni(-0.9, 0.9);
    p.lambda_chi = with_lambda ? uni(-0.5, 0.5) : 0.0;
    p.lambda_xi = with_lambda ? uni(-0.5, 0.5) : 0.0;
    p.s.resize(static_cast<std::size_t>(n_contracts));
    for (auto& si : p.s) si = uni(0.01, 0.3);
    return p;
}

/// Random panel with arbitrary (not model-generated) values; the joint
/// density comparison holds for any y. Maturities land in [0, 2] and
/// occasionally exactly 0.
inline ObservationPanel random_panel(ss2f::NormalRng& rng, Eigen::Index n_dates, int n,
                                     double dt, double missing_prob = 0.0) {
    ObservationPanel panel;
    panel.times.resize(static_cast<std::size_t>(n_dates));
    panel.taus.resize(n_dates, n);
    panel.y.resize(n_dates, n);
    for (Eigen::Index t = 0; t < n_dates; ++t) {
        panel.times[static_cast<std::size_t>(t)] = static_cast<double>(t + 1) * dt;
        for (int i = 0; i < n; ++i) {
            const double u = rng.uniform01();
            panel.taus(t, i) = u < 0.1 ? 0.0 : 2.0 * rng.uniform01();
            if (missing_prob > 0.0 && rng.uniform01() < missing_prob) {
                panel.y(t, i) = std::numeric_limits<double>::quiet_NaN();
            } else {
                panel.y(t, i) = -2.0 + rng.normal();
            }
        }
    }
    return panel;
}

}  // namespace oracle
