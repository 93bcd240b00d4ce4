#include "ss2f/system.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace ss2f {

TransitionSystem transition_system(const ParamVector& p, double dt) {
    TransitionSystem t;
    t.dt = dt;
    t.c = Eigen::Vector2d(0.0, p.mu_xi / p.gamma * -std::expm1(-p.gamma * dt));
    t.G = Eigen::Matrix2d::Zero();
    t.G(0, 0) = std::exp(-p.kappa * dt);
    t.G(1, 1) = std::exp(-p.gamma * dt);
    t.W = state_cov(p, dt);
    return t;
}

MeasurementSystem measurement_system(const ParamVector& p,
                                     const Eigen::VectorXd& maturities) {
    const Eigen::Index n = maturities.size();
    if (static_cast<Eigen::Index>(p.s.size()) != n)
        throw std::invalid_argument("measurement_system: " + std::to_string(p.s.size()) +
                                    " noise sds for " + std::to_string(n) + " maturities");

    MeasurementSystem m;
    m.maturities = maturities;
    m.d.resize(n);
    m.F.resize(2, n);
    m.v.resize(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const double tau = maturities[i];
        if (tau < 0.0)
            throw std::invalid_argument("measurement_system: negative maturity at contract " +
                                        std::to_string(i + 1));
        m.d[i] = a_function(p, tau);
        m.F(0, i) = std::exp(-p.kappa * tau);
        m.F(1, i) = std::exp(-p.gamma * tau);
        m.v[i] = p.s[static_cast<std::size_t>(i)] * p.s[static_cast<std::size_t>(i)];
    }
    return m;
}

}  // namespace ss2f
